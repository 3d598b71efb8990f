import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="anisopy",
    version="1.0.0",
    author="anisopy contributors",
    description="Q1 finite element experiments for anisotropic singular perturbation problems",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3.10",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=setuptools.find_packages(exclude=["tests"]),
    python_requires=">=3.10",
    install_requires=["numpy>=1.22", "scipy>=1.12"],
    entry_points={"console_scripts": ["anisopy = anisopy.cli:main"]},
)
