# tests/test_linalg/__init__.py
