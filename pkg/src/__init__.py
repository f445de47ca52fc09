# rsld-lab - resolution with reduction over lists and priority goals
