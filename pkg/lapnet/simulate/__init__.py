# lapnet/simulate/__init__.py
