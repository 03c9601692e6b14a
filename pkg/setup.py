from setuptools import setup
from textwrap import dedent

setup(
    name='rieszcrit',
    version="0.1",

    description='Riesz function and Baez-Duarte sequence to high precision',
    license='MIT',

    long_description=dedent("""\
    Computes the Riesz function R(x), the Baez-Duarte sequence c_k and
    their two-parameter generalisations by several independent methods
    (power series, Kummer acceleration, Moebius sums with tail expansion,
    exact forward differences, the zeta-zero asymptotic), checks the
    explicit inequalities relating them, and writes the data behind the
    standard plots of both as CSV.
    """),

    packages=['rieszcrit'],
    python_requires='>=3.8',
    install_requires=[
        'mpmath>=1.2',
        'numpy>=1.20',
        'scipy>=1.6',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': [
            'rieszcrit = rieszcrit.cli:main',
        ]},
)
