from collections import namedtuple
from heapq import merge
from ..base import MAX_FRAME, BITS_NS, INFINITE
from .events import Event, ARRIVAL

__all__ = ['Burst', 'FlowGen', 'gen_events']

# rate paces the frames of a burst; None stamps them all at one instant
Burst = namedtuple('Burst', ['size', 'period', 'first_at', 'until', 'rate'], defaults = (None,))


class FlowGen:
	"""
	Constant bit rate source with optional periodic bursts.

	periods are the [start, stop) spans in which the CBR part runs; the
	k-th frame of a span leaves at start + floor(k * frame*8/rate).
	Each burst is ceil(size/frame) frames, the last one carrying the
	remainder so a burst totals exactly size. They share one instant,
	or leave back to back at the burst rate when it has one.
	"""
	def __init__(self, flow, slice, cls, rate, frame = MAX_FRAME, periods = ((0, INFINITE),),
				burst = None):
		if frame <= 0:
			raise ValueError('Flow {} needs a positive frame size.'.format(flow))
		self.flow = flow
		self.slice = slice
		self.cls = cls
		self.rate = int(rate)
		self.frame = int(frame)
		self.periods = sorted((int(a), b if b == INFINITE else int(b)) for a, b in periods)
		self.burst = burst

	@property
	def interval(self):
		"""CBR inter-departure time in ns (not rounded)."""
		return self.frame * BITS_NS / self.rate if self.rate else INFINITE

	def burst_frames(self):
		if self.burst is None:
			return []
		n, rem = divmod(self.burst.size, self.frame)
		sizes = [self.frame] * n
		if rem:
			sizes.append(rem)
		return sizes

	def _cbr(self, upto):
		if self.rate <= 0:
			return
		step = self.frame * BITS_NS
		for start, stop in self.periods:
			end = min(stop, upto)
			k = 0
			while True:
				t = start + k*step // self.rate
				if t >= end:
					break
				yield t
				k += 1

	def _cbr_frames(self, upto):
		for t in self._cbr(upto):
			yield t, 0, [self.frame]

	def _bursts(self, upto):
		b = self.burst
		if b is None or b.size <= 0 or b.period <= 0:
			return
		sizes = self.burst_frames()
		end = min(b.until, upto)
		t = b.first_at
		while t < end:
			if not b.rate:
				yield t, 1, sizes
			else:
				sent = 0
				for nbytes in sizes:
					at = t + sent * BITS_NS // b.rate
					if at >= upto:
						break
					yield at, 1, [nbytes]
					sent += nbytes
			t += b.period

	def times(self, upto = INFINITE):
		"""
		Yields (time, [frame sizes]) in time order up to, not
		including, upto. CBR frames come before burst frames stamped at
		the same instant.
		"""
		last, frames = None, []
		for t, _, sizes in merge(self._cbr_frames(upto), self._bursts(upto)):
			if t != last and frames:
				yield last, frames
				frames = []
			last = t
			frames.extend(sizes)
		if frames:
			yield last, frames

	def __repr__(self):
		return 'FlowGen({}, {} bps)'.format(self.flow, self.rate)


def gen_events(gen, upto):
	"""Every arrival of gen before upto as Arrival events."""
	out = []
	for t, frames in gen.times(upto):
		for nbytes in frames:
			out.append(Event(t, len(out), ARRIVAL, gen.flow, nbytes))
	return out
