"""
Property lab for rsld-lab
Seeded instance tests of lowering, lifting, determinism, duplication and embedding properties
"""
