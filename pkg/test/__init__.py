"""
Test package for rsld-lab
"""
