from numpy import zeros, full, int64, float64
from numba import njit
from .base import USE_NUMBA

__all__ = ['window_sums', 'window_index']


@njit(fastmath = True, nogil = True, cache = True)
def _window_sums(flow, t, nbytes, latency, transit, n_flows, n_windows, width):
	total = zeros((n_flows, n_windows), int64)
	peak = full((n_flows, n_windows), -1, int64)
	lat_sum = zeros((n_flows, n_windows), float64)
	count = zeros((n_flows, n_windows), int64)
	transit_peak = full((n_flows, n_windows), -1, int64)

	for i in range(t.shape[0]):
		w = t[i] // width
		if w >= n_windows:
			continue
		f = flow[i]
		total[f, w] += nbytes[i]
		count[f, w] += 1
		lat_sum[f, w] += latency[i]
		if latency[i] > peak[f, w]:
			peak[f, w] = latency[i]
		if transit[i] > transit_peak[f, w]:
			transit_peak[f, w] = transit[i]
	return total, peak, lat_sum, count, transit_peak


@njit(fastmath = True, nogil = True, cache = True)
def _window_index(t, width):
	out = zeros(t.shape[0], int64)
	for i in range(t.shape[0]):
		out[i] = t[i] // width
	return out


def window_sums(flow, t, nbytes, latency, transit, n_flows, n_windows, width):
	"""
	Per (flow, window): delivered bytes, max latency (-1 when nothing
	was delivered), latency sum, packet count and max transit time.
	Records at or past the last window end are ignored.
	[Added 19/10/2026]
	"""
	if not USE_NUMBA:
		return _window_sums.py_func(flow, t, nbytes, latency, transit, n_flows, n_windows, width)
	return _window_sums(flow, t, nbytes, latency, transit, n_flows, n_windows, width)


def window_index(t, width):
	if not USE_NUMBA:
		return _window_index.py_func(t, width)
	return _window_index(t, width)
