"""
Setup script for the Mendler CDLE checker
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read README for long description
readme_file = Path(__file__).parent / "README.md"
long_description = ""
if readme_file.exists():
    long_description = readme_file.read_text(encoding='utf-8')

setup(
    name="mendler_cdle",
    version="1.0.0",
    author="Mendler CDLE contributors",
    description="Type checker for CDLE with a checked corpus of Mendler-style encodings "
                "and numeral benchmarks",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={
        'mendler_cdle': ['data/corpus/*.mcd', 'data/corpus/MANIFEST'],
    },
    include_package_data=True,
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Software Development :: Compilers",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    python_requires=">=3.8",
    install_requires=[
        "lark>=1.1.5",
        "numpy>=1.21",
    ],
    extras_require={
        'dev': [
            'pytest>=7.0',
            'pytest-cov>=4.0',
        ],
    },
    entry_points={
        'console_scripts': [
            'mendler-cdle=mendler_cdle.__main__:main',
        ],
    },
    keywords="lambda-calculus type-theory cdle mendler lambda-encodings type-checker",
)
