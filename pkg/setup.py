#!/usr/bin/env python

import os
import email.utils
from setuptools import setup, find_packages

# package metadata
__package__ = 'cutsv'
__version__ = '0.0.1'
__author__ = 'Fpemud <fpemud@sina.com>'

# Do setup
setup(
    name=__package__,
    version=__version__,
    description="Unfitted Scott-Vogelius Stokes discretization on Clough-Tocher meshes, with a convergence study driver.",
    author=email.utils.parseaddr(__author__)[0],
    author_email=email.utils.parseaddr(__author__)[1],
    url='https://github.com/fpemud-os/cutsv',
    license='GNU General Public License (GPL)',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: GNU General Public License v2 or later (GPLv2+)',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
        ],
    package_dir={
        __package__: os.path.join('python3', __package__),
    },
    packages=find_packages("python3"),
    include_package_data=True,
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'scipy>=1.12',
        'matplotlib',
        'robust_layer',
    ],
    extras_require={
        'test': ['pytest'],
    },
    scripts=['tools/cutsv-study'],
)
