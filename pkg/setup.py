#!/usr/bin/env python3
"""Setup script for wasserstein-tradeoffs package."""

from setuptools import setup, find_packages

setup(
    packages=find_packages(where="src") + ["cli"],
    package_dir={
        "": "src",
        "cli": "cli"
    },
    entry_points={
        "console_scripts": [
            "wdro-tradeoffs=cli.main:main",
            "wdro-tradeoffs-run=cli.run:main",
            "wdro-tradeoffs-verify=cli.verify:main",
            "wdro-tradeoffs-history=cli.history:main",
        ],
    },
)
