# lapnet/graph/__init__.py
