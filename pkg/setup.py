from setuptools import find_packages, setup

setup(
    name='secant-scope',
    version='1.0.0',
    description='Multisecant lines, gonality and stratum dimensions of space curves',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    py_modules=['app'],
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.24',
        'marshmallow>=3.20,<4',
        'click>=8.1,<8.2',
    ],
    entry_points={
        'console_scripts': [
            'secant-scope=app:main',
        ],
    },
)
