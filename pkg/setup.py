"""Run setuptools."""
from setuptools import find_packages, setup

setup(
    name = "affgroup",
    version = "0.1.0",
    author = "AffGroup contributors",
    description = "Lifting, group convolution and invariance criteria for images under the affine group of the plane.",
    keywords = "affine group-convolution haar-measure invariance equivariance".split(),
    packages = find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires = ">=3.8",
    install_requires = ["numpy>=1.22", "scipy>=1.8", "pydantic>=2.0,<3"],
    extras_require = {"test": ["pytest>=7.0"]},
    entry_points = {"console_scripts": ["affgroup = affgroup.cli:main"]},
    long_description = open("README.md", encoding="utf-8").read(),
    long_description_content_type = "text/markdown",
    license = "MIT",
    classifiers = [
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: MIT License",
        "Intended Audience :: Science/Research",
        "Natural Language :: English",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Image Processing",
        "Topic :: Software Development :: Libraries :: Python Modules",
        "Typing :: Typed",
    ],
)
