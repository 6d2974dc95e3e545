# lapnet/performance/__init__.py
