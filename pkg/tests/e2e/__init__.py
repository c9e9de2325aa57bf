"""
End-to-end tests package initialization.
"""
