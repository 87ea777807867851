from setuptools import setup, find_packages

setup(
    name='convexcheck',
    version='0.1.0',
    license='MIT',
    description='Exact convexity certificates for small DAG ReLU networks',
    packages=find_packages(exclude=['tests', 'scripts']),
    package_dir={'convexcheck': 'convexcheck'},
    python_requires='>=3.9',
    install_requires=[
        'numpy',
        'scipy',
        'joblib',
        'tqdm',
        'xarray',
        'pandas',
    ],
    extras_require={
        'netcdf': ['netCDF4'],
        'test': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': ['convexcheck=convexcheck.cli:main'],
    },
    include_package_data=True,
    zip_safe=False
)
