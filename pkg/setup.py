import setuptools
import os

version = "1.0.0"

with open(os.path.join(os.path.dirname(__file__), "README.md")) as f:
    LongDescription = f.read()

setuptools.setup(
    name="compactplace",
    zip_safe=True,
    version=version,
    description="Compact robotic placement of convex fragments.",
    long_description_content_type="text/markdown",
    long_description=LongDescription,
    install_requires=[
        "numpy>=1.22",
        "shapely>=2.0",
        "torch>=2.0",
        "svgwrite>=1.4",
        "trimesh>=3.20",
        "monotonic>=1.3",
    ],
    extras_require={
        "test": ["pytest>=7.0", "mock>=2.0.0"],
    },
    entry_points={
        "console_scripts": ["compactplace=compactplace.cli.main:main"],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering",
    ],
    python_requires=">=3.9",
    packages=setuptools.find_packages(exclude=["examples", "examples.*"]),
)
