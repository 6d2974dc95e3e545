# lapnet/settings/__init__.py
