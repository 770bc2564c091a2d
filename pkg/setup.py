# -*- coding: utf-8 -*-
from pathlib import Path

from setuptools import find_packages, setup


def read_requirements():
    lines = Path(__file__).with_name("requirements.txt").read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip() and not line.lstrip().startswith("#")]


setup(
    name="kpboost",
    version="1.0.0",
    description="Boosted keypoint-presence features for visual object categorization",
    package_dir={"": "src"},
    packages=find_packages("src"),
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"dev": ["pytest>=8.1.0", "pytest-cov>=5.0.0", "pytest-timeout>=2.3.0"]},
    entry_points={"console_scripts": ["kpboost=kpboost.main:main"]},
)
