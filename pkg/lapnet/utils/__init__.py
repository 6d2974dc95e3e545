# lapnet/utils/__init__.py
