# Tools modules: trace export
