from numbers import Integral, Real
import re

USE_NUMBA = True
PRINT_ALL_WARNINGS = False
RAW_LATENCY_DEFAULT = False

MAX_FRAME = 1538
QUEUE_CAP_DEFAULT = 1000
GNB_QUEUE_CAP_DEFAULT = 10000
QUANTUM_DEFAULT = 1538

NS = 1
US = 1000
MS = 1000000
SECOND = 1000000000
BITS_NS = 8 * SECOND		# bits/byte * ns/s, the token accrual divisor

KBPS = 1000
MBPS = 1000000
GBPS = 1000000000

SAMPLE_INTERVAL = SECOND
GNB_LINK_RATE = GBPS
BOTTLENECK_RATE = 100 * MBPS

INFINITE = float('inf')

"""
------------------------------------------------------------
Type Checks
Updated 19/10/2026
------------------------------------------------------------
"""
ListTuple = (list, tuple)

def isList(X):
	return type(X) in ListTuple

def isDict(X):
	return isinstance(X, dict)

def isNumber(X):
	return isinstance(X, Real) and not isinstance(X, bool)

"""
------------------------------------------------------------
Units
	>>> Rates are integer bits per second, sizes integer bytes
		and times integer nanoseconds since simulation start.
	>>> Strings carry their unit: "52.8 Mbps", "50 KB", "10 ms"
Updated 19/10/2026
------------------------------------------------------------
"""
_UNIT = re.compile(r'^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*([A-Za-z]*)\s*$')

_RATE_UNITS = {'': 1, 'bps': 1, 'kbps': KBPS, 'mbps': MBPS, 'gbps': GBPS}
_SIZE_UNITS = {'': 1, 'b': 1, 'kb': 1000, 'mb': 1000000, 'kib': 1024, 'mib': 1048576}
_TIME_UNITS = {'': SECOND, 's': SECOND, 'ms': MS, 'us': US, 'ns': NS}


def _parse(value, units, what):
	if isNumber(value):
		return value, units['']
	if not isinstance(value, str):
		raise ValueError('{} must be a number or a string, got {!r}'.format(what, value))
	match = _UNIT.match(value)
	if match is None:
		raise ValueError('cannot read {} from {!r}'.format(what, value))
	number, unit = match.groups()
	unit = unit.lower()
	if unit not in units:
		raise ValueError('unknown {} unit {!r} in {!r}'.format(what, unit, value))
	return float(number), units[unit]


def rate(value):
	"""
	Bits per second from a number (already bps) or a string like
	"1.2 Mbps". Rounded to the nearest integer.
	"""
	number, scale = _parse(value, _RATE_UNITS, 'rate')
	out = int(round(number * scale))
	if out < 0: raise ValueError('rate must be non-negative, got {!r}'.format(value))
	return out


def size(value):
	"""
	Bytes from a number or a string like "50 KB" (1 KB = 1000 B).
	"""
	number, scale = _parse(value, _SIZE_UNITS, 'size')
	out = int(round(number * scale))
	if out < 0: raise ValueError('size must be non-negative, got {!r}'.format(value))
	return out


def duration(value):
	"""
	Nanoseconds from seconds (number) or a string like "10 ms".
	"""
	number, scale = _parse(value, _TIME_UNITS, 'time')
	out = int(round(number * scale))
	if out < 0: raise ValueError('time must be non-negative, got {!r}'.format(value))
	return out


def serialization(nbytes, bps):
	"""
	Exact time in ns to put nbytes on a bps wire, rounded up so
	transmissions never overlap.
	"""
	return -(-nbytes * BITS_NS // bps)


def to_mbps(nbytes, window):
	return nbytes * 8 * SECOND / window / MBPS
