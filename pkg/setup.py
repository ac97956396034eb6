"""
Setup file for backwards compatibility with pip install -e .
"""
from setuptools import setup

setup()

