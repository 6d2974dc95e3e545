from setuptools import find_packages, setup

from lapnet import __version__

with open("requirements.txt", encoding="utf-8") as f:
    requirements = [line.split("#")[0].strip() for line in f if line.split("#")[0].strip()]

setup(
    name="lapnet",
    version=__version__,
    description="H2 performance of linear consensus networks through Laplacian spectra",
    packages=find_packages(exclude=("tests", "tests.*")),
    python_requires=">=3.10",
    install_requires=[r for r in requirements if not r.startswith(("pytest", "iniconfig", "pluggy"))],
    entry_points={"console_scripts": ["lapnet=lapnet.main:main"]},
)
