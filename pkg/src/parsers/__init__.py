"""
Parsers package for rsld-lab
Program, clause and goal text syntax
"""
