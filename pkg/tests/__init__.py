"""
Mendler CDLE Test Suite
"""
