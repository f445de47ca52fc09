# Engine modules
