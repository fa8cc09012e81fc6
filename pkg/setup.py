from setuptools import setup, find_packages
from pathlib import Path

this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text(encoding='utf-8')

version_dict = {}
with open('ideaflow/version.py') as f:
    exec(f.read(), version_dict)

setup(
    name="ideaflow",
    version=version_dict['__version__'],
    description="Lead-lag idea flows between two groups of word time series",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"ideaflow": ["data/*.txt"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Information Analysis",
    ],
    python_requires=">=3.9",
    install_requires=[
        "requests>=2.31.0",
        "numpy>=1.22",
        "scipy>=1.9",
        "scikit-learn>=1.2",
        "pandas>=1.5",
        "matplotlib>=3.6",
    ],
    extras_require={
        'dev': [
            'pytest>=7.4.0',
            'pytest-cov>=4.1.0',
            'black>=23.7.0',
            'flake8>=6.1.0',
            'mypy>=1.5.0',
        ],
    },
    entry_points={
        'console_scripts': [
            'ideaflow=ideaflow.cli:main',
        ],
    },
)
