from __future__ import (
    absolute_import,
    division,
    print_function,
    with_statement,
)

from setuptools import find_packages, setup


def readme():
    with open("README.rst") as f:
        return f.read()


def version():
    scope = {}
    with open("slotbench/_version.py") as f:
        exec(f.read(), scope)
    return scope["get_versions"]()["version"]


reqs = [line.strip() for line in open("requirements.txt")]


setup(
    name="slotbench",
    version=version(),
    description="Object-centric scene representations benchmarked on tabletop manipulation",
    long_description=readme(),
    license="GPLv3",
    packages=find_packages(exclude=["tests.*", "tests"]),
    install_requires=reqs,
    tests_require=["pytest"],
    entry_points={
        "console_scripts": ["slotbench=slotbench.harness.cli:main"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ],
    include_package_data=True,
)
