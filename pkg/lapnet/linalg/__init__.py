# lapnet/linalg/__init__.py
