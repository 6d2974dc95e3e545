# tests/test_utils/__init__.py
# This file can be empty.