from setuptools import setup, find_packages

exec(open("wqed/version.py").read())

setup(
    name="wqed",
    version=__version__,
    description=("A Python package for the two-photon spectrum of atom "
                 "arrays chirally coupled to a waveguide"),
    packages=find_packages(exclude=["tests"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "joblib",
    ],
    extras_require={"test": ["pytest"]},
    long_description=open('README.rst').read(),
    long_description_content_type='text/x-rst',
    entry_points={"console_scripts": ["wqed=wqed.__main__:main"]}
)
