from setuptools import setup, find_packages

setup(
    name='offdelta',
    version='0.1.0',
    description='Spectra of two trapped particles interacting through displaced delta potentials',
    author='kenoharada',
    license='MIT',
    packages=find_packages('src'),
    package_dir={'': 'src'},
    install_requires=[
        'numpy',
        'scipy>=1.7',
        'mpmath',
        'pandas>=1.5',
        'tenacity',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': [
            'offdelta=offdelta.cli.main:main',
        ],
    },
    python_requires='>=3.9',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
)
