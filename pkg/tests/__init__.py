"""
Tests for the anick package.
"""
