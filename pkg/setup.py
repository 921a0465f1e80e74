# The project metadata lives in pyproject.toml. This file only tells setuptools
# where the package sources are, for tools that still call setup.py directly.

from setuptools import setup, find_packages

setup(
    name="splitric",
    package_dir={"": "src"},
    packages=find_packages("src"),
    package_data={"splitric": ["py.typed"]},
)
