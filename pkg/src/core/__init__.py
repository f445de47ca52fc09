"""
Core package for rsld-lab
Terms, substitutions, unification, lineage tags and priority goals
"""
