from setuptools import setup, find_packages

# set classifiers
classifiers = [
    'Development Status :: 4 - Beta',
    'Programming Language :: Python :: 3 :: Only',
    'Operating System :: OS Independent',
    'Topic :: Scientific/Engineering :: Artificial Intelligence',
    'Intended Audience :: Science/Research']

# main setup
setup(
    name = 'pyfomo',
    version = '1.0.0',
    description = 'Grid/centroid tinyML object detection with int8 quantization, profiling and an exploration simulator.',
    license = 'MIT',
    packages = find_packages(exclude=['unittests']),
    classifiers = classifiers,
    install_requires = ['numpy'],
    extras_require = {'plot': ['matplotlib']},
    entry_points = {'console_scripts': ['pyfomo = pyfomo.cli:main']},
    zip_safe = False)
