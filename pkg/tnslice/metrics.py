from array import array
import json
import logging
import os
from numpy import asarray, int64, arange, nan, where, isnan, isin
import pandas as pd
from psutil import virtual_memory
from .base import SAMPLE_INTERVAL, SECOND, MS
from .exceptions import FutureExceedsMemory
from .numba import window_sums, window_index

__all__ = ['MetricsStore', 'record_delivery', 'export', 'load_exported',
			'compare_dirs', 'interval_summary', 'peak_latency', 'OBSERVABLES']

logger = logging.getLogger(__name__)

OBSERVABLES = ('throughput', 'latency', 'loss', 'occupancy')
COLUMNS = ['t_start', 'flow_or_queue', 'value']
LATENCY_EXTRA = ['mean', 'transit']
NO_COLOR = -1
RAW_ROW_BYTES = 160


class MetricsStore:
	"""
	Results of one run.

	Deliveries are kept as flat int64 records (flow, delivered_at,
	size, latency, transit, color) and folded into fixed windows by
	finalize():
		throughput[flow]	Mbps per window
		latency[flow]		max latency in ms per window (nan if idle)
		latency_mean[flow]	mean latency in ms per window
		transit[flow]		max time in ms from PE1 admission to delivery
		loss[queue]			cumulative drops at the end of each window
		occupancy[queue]	packets queued at the end of each window
	Windows start at 0 and are interval wide.
	"""
	def __init__(self, name, flows, duration, interval = SAMPLE_INTERVAL, raw = False):
		self.name = name
		self.flows = list(flows)
		self.index = {f: i for i, f in enumerate(self.flows)}
		self.duration = duration
		self.interval = interval
		self.n_windows = -(-duration // interval)
		self.raw = raw

		self._flow = array('q')
		self._t = array('q')
		self._size = array('q')
		self._latency = array('q')
		self._transit = array('q')
		self._color = array('q')
		self.delivered_bytes = 0
		self.generated = 0
		self.events = 0
		self.counters = {}

		self.queue_ids = []
		self._queues = []
		self.sample_times = []
		self.loss = {}
		self.occupancy = {}
		self.throughput = {}
		self.latency = {}
		self.latency_mean = {}
		self.transit = {}

	@property
	def windows(self):
		"""Window starts in seconds."""
		return arange(self.n_windows) * (self.interval / SECOND)

	def register(self, qid, queue):
		"""queue needs len() and a drops attribute."""
		self.queue_ids.append(qid)
		self._queues.append((qid, queue))
		self.loss[qid] = []
		self.occupancy[qid] = []

	def record(self, flow, now, nbytes, latency, transit = None, color = NO_COLOR):
		self._flow.append(self.index[flow])
		self._t.append(now)
		self._size.append(nbytes)
		self._latency.append(latency)
		self._transit.append(latency if transit is None else transit)
		self._color.append(color)
		self.delivered_bytes += nbytes

	def sample(self, now):
		self.sample_times.append(now)
		for qid, queue in self._queues:
			self.occupancy[qid].append(len(queue))
			self.loss[qid].append(queue.drops)

	def __len__(self):
		return len(self._t)

	def records(self):
		"""
		(flow index, delivered_at, size, latency, transit, color) as int64
		arrays. color is -1 for packets no marker colored.
		"""
		return tuple(asarray(a, dtype = int64) for a in (self._flow, self._t, self._size,
														self._latency, self._transit, self._color))

	def finalize(self):
		flow, t, nbytes, latency, transit, _ = self.records()
		total, peak, lat_sum, count, transit_peak = window_sums(flow, t, nbytes, latency, transit,
							len(self.flows), self.n_windows, self.interval)
		scale = 8 * SECOND / self.interval / 1e6
		for f, i in self.index.items():
			self.throughput[f] = total[i] * scale
			self.latency[f] = where(peak[i] < 0, nan, peak[i] / MS)
			with_data = count[i] > 0
			mean = lat_sum[i] / where(with_data, count[i], 1) / MS
			self.latency_mean[f] = where(with_data, mean, nan)
			self.transit[f] = where(transit_peak[i] < 0, nan, transit_peak[i] / MS)

		# windows the run never sampled keep the last known value
		for qid in self.loss:
			for series in (self.loss[qid], self.occupancy[qid]):
				while len(series) < self.n_windows:
					series.append(series[-1] if series else 0)
				del series[self.n_windows:]
		self._queues = []
		return self

	def series(self, observable, key):
		values = getattr(self, observable)[key]
		return list(zip(self.windows.tolist(), list(values)))

	def frames(self):
		"""One tidy DataFrame per observable, in export order."""
		windows = self.windows
		out = {}
		for observable in OBSERVABLES:
			rows = []
			source = getattr(self, observable)
			for key in sorted(source):
				frame = pd.DataFrame({'t_start': windows, 'flow_or_queue': key,
									'value': pd.Series(source[key], dtype = float)})
				if observable == 'latency':
					frame['mean'] = pd.Series(self.latency_mean[key], dtype = float)
					frame['transit'] = pd.Series(self.transit[key], dtype = float)
				rows.append(frame)
			if rows:
				frame = pd.concat(rows, ignore_index = True)
			else:
				frame = pd.DataFrame(columns = _columns(observable))
			out[observable] = frame.sort_values(['t_start', 'flow_or_queue'], kind = 'mergesort',
												ignore_index = True)
		return out


def _columns(observable):
	return COLUMNS + (LATENCY_EXTRA if observable == 'latency' else [])


def record_delivery(store, pkt, now):
	admitted = pkt.created_at if pkt.admitted_at is None else pkt.admitted_at
	color = NO_COLOR if pkt.color is None else int(pkt.color)
	store.record(pkt.flow, now, pkt.size, now - pkt.created_at, now - admitted, color)


def _raw_frame(store):
	n = len(store)
	if n * RAW_ROW_BYTES > virtual_memory().available:
		raise FutureExceedsMemory()
	flow, t, nbytes, latency, transit, color = store.records()
	return pd.DataFrame({
		'window': window_index(t, store.interval),
		't_delivered': t / SECOND,
		'flow': pd.Categorical.from_codes(flow, store.flows) if n else pd.Series([], dtype = object),
		'size': nbytes,
		'latency_ms': latency / MS,
		'transit_ms': transit / MS,
		'color': color,
	})


def export(store, format = 'csv', path = '.'):
	"""
	Writes <scenario>_<observable>.csv for each observable (columns
	t_start, flow_or_queue, value; the latency file adds mean and
	transit), or one
	<scenario>_metrics.json keyed by observable. Numbers carry three
	decimals. Returns the written paths.
	"""
	if format not in ('csv', 'json'):
		raise ValueError("format must be 'csv' or 'json', got {!r}".format(format))
	os.makedirs(path, exist_ok = True)
	frames = store.frames()
	written = []

	if format == 'csv':
		for observable, frame in frames.items():
			file = os.path.join(path, '{}_{}.csv'.format(store.name, observable))
			frame.to_csv(file, index = False, float_format = '%.3f')
			written.append(file)
		if store.raw:
			file = os.path.join(path, '{}_latency_raw.csv'.format(store.name))
			_raw_frame(store).to_csv(file, index = False, float_format = '%.3f')
			written.append(file)
	else:
		doc = {}
		for observable, frame in frames.items():
			doc[observable] = json.loads(frame.round(3).to_json(orient = 'records'))
		if store.raw:
			doc['latency_raw'] = json.loads(_raw_frame(store).round(3).to_json(orient = 'records'))
		file = os.path.join(path, '{}_metrics.json'.format(store.name))
		with open(file, 'w') as f:
			json.dump(doc, f, indent = 1, sort_keys = True)
		written.append(file)

	logger.info('Wrote %d file(s) for %s to %s', len(written), store.name, path)
	return written


def _read(path, name, observable):
	csv = os.path.join(path, '{}_{}.csv'.format(name, observable))
	if os.path.exists(csv):
		return pd.read_csv(csv)
	doc = os.path.join(path, '{}_metrics.json'.format(name))
	if os.path.exists(doc):
		with open(doc) as f:
			rows = json.load(f).get(observable, [])
		return pd.DataFrame(rows, columns = COLUMNS + (['mean'] if observable == 'latency' else []))
	raise FileNotFoundError('No {} results for {} in {}'.format(observable, name, path))


def load_exported(path, name, interval = SAMPLE_INTERVAL):
	"""
	Reads exported files back into a MetricsStore. Flows are the ids of
	the throughput file, queues those of the occupancy file.
	"""
	frames = {o: _read(path, name, o) for o in OBSERVABLES}
	flows = sorted(frames['throughput']['flow_or_queue'].astype(str).unique())
	n_windows = int(frames['throughput']['t_start'].nunique()) if flows else \
				int(frames['occupancy']['t_start'].nunique())
	store = MetricsStore(name, flows, max(n_windows, 1) * interval, interval)
	store.n_windows = n_windows

	def _pivot(frame, column = 'value'):
		out = {}
		for key, group in frame.groupby('flow_or_queue', sort = True):
			out[str(key)] = group.sort_values('t_start')[column].to_numpy(dtype = float)
		return out

	store.throughput = _pivot(frames['throughput'])
	store.latency = _pivot(frames['latency'])
	for column, attr in (('mean', 'latency_mean'), ('transit', 'transit')):
		if column in frames['latency']:
			setattr(store, attr, _pivot(frames['latency'], column))
	store.loss = {k: v.tolist() for k, v in _pivot(frames['loss']).items()}
	store.occupancy = {k: v.tolist() for k, v in _pivot(frames['occupancy']).items()}
	return store


def _names(path):
	names = set()
	for file in os.listdir(path):
		for observable in OBSERVABLES:
			suffix = '_{}.csv'.format(observable)
			if file.endswith(suffix):
				names.add(file[:-len(suffix)])
		if file.endswith('_metrics.json'):
			names.add(file[:-len('_metrics.json')])
	return sorted(names)


def compare_dirs(out, golden, tolerance = 5.0):
	"""
	Matches every golden series against out by (observable, id,
	t_start) and returns the rows that differ by more than tolerance
	percent of the golden value (plus the 0.001 print resolution).
	Missing scenarios, series or windows count as deviations.
	"""
	deviations = []
	for name in _names(golden):
		for observable in OBSERVABLES:
			try:
				want = _read(golden, name, observable)
			except FileNotFoundError:
				continue
			try:
				got = _read(out, name, observable)
			except FileNotFoundError:
				deviations.append(dict(scenario = name, observable = observable, id = None,
										t_start = None, value = None, golden = None))
				continue

			both = want.merge(got, on = ['t_start', 'flow_or_queue'], how = 'left',
							suffixes = ('_golden', ''))
			a = both['value'].to_numpy(dtype = float)
			b = both['value_golden'].to_numpy(dtype = float)
			missing = isnan(a) & ~isnan(b)
			off = abs(a - b) > tolerance / 100 * abs(b) + 1e-3
			for i in where(missing | (off & ~isnan(a) & ~isnan(b)))[0]:
				row = both.iloc[i]
				deviations.append(dict(scenario = name, observable = observable,
										id = row['flow_or_queue'], t_start = float(row['t_start']),
										value = None if missing[i] else float(a[i]),
										golden = float(b[i])))
	return deviations


def interval_summary(store, intervals, settle = 0):
	"""
	Per interval and flow: mean throughput (Mbps), max and mean
	latency and max transit (ms) over the windows lying inside
	[start + settle, stop). intervals and settle are in seconds.
	"""
	windows = store.windows
	width = store.interval / SECOND
	rows = []
	for i, (start, stop) in enumerate(intervals):
		inside = (windows >= start + settle - 1e-9) & (windows + width <= stop + 1e-9)
		for flow in store.flows:
			tp = store.throughput[flow][inside]
			lat = store.latency[flow][inside]
			mean = store.latency_mean[flow][inside] if flow in store.latency_mean else lat
			transit = store.transit[flow][inside] if flow in store.transit else lat
			seen = ~isnan(lat)
			rows.append(dict(interval = i, start = start, stop = stop, flow = flow,
							throughput = float(tp.mean()) if len(tp) else nan,
							latency_max = float(lat[seen].max()) if seen.any() else nan,
							latency_mean = float(mean[seen].mean()) if seen.any() else nan,
							transit_max = float(transit[seen].max()) if seen.any() else nan))
	return pd.DataFrame(rows, columns = ['interval', 'start', 'stop', 'flow', 'throughput',
										'latency_max', 'latency_mean', 'transit_max'])


def peak_latency(store, flows = None, start = 0, stop = None, color = None, transit = False):
	"""
	Max latency in ms over the deliveries of flows (all by default)
	in [start, stop) seconds, from the kept records. color limits it to
	packets a marker gave that color and transit measures from PE1
	admission. nan when nothing matches.
	"""
	flow, t, _, latency, since_admission, colors = store.records()
	keep = t >= start * SECOND
	if stop is not None:
		keep &= t < stop * SECOND
	if flows is not None:
		keep &= isin(flow, [store.index[f] for f in flows])
	if color is not None:
		keep &= colors == int(color)
	values = (since_admission if transit else latency)[keep]
	return float(values.max()) / MS if len(values) else nan
