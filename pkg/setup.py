from setuptools import setup, find_packages

install_requires = [
        'numpy >= 1.13.0',
        'pandas >= 0.21.0',
        'torch >= 0.4.0',
        'numba >= 0.37.0',
        'psutil >= 4.0.0',
        'PyYAML >= 5.1'
    	]

extras_require = {
        'test': ['pytest >= 6.0', 'hypothesis >= 5.0'],
    	}


desc = """\
tnslice

Deterministic discrete-event simulator of transport network slicing at
the edge of a 5G transport network. Compares a three level hierarchical
token bucket ingress policer (global, slice and class policers with
CIR/PIR, burst control and borrowing) against an IETF style per slice
and per class policer and a single level trTCM per flow model, over a
gNB -> PE1 -> P -> PE2 -> UPF path with priority + DRR egress banks.
Written in Numpy, Numba, Pandas & PyTorch multiprocessing.
"""


setup(name = 'tnslice',
      version = '0.1.0',
      long_description = desc,
      packages = find_packages(exclude = ['tests', 'tests.*']),
      install_requires = install_requires,
      extras_require = extras_require,
      entry_points = {
        'console_scripts': ['tnslice = tnslice.cli:main'],
        },
      classifiers=[
        'Development Status :: 3 - Alpha',

        'Intended Audience :: Science/Research',
        'Intended Audience :: Telecommunications Industry',

        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',

        'Programming Language :: Python :: 3',

        'Topic :: Scientific/Engineering',
        'Topic :: System :: Networking',
        'Topic :: Software Development :: Libraries :: Python Modules',
    		]
      )
