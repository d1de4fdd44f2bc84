from ..base import MAX_FRAME
from ..model import Color
from .bucket import Bucket

__all__ = ['TrTcmState', 'TwoColorState', 'trtcm_mark', 'two_color_mark', 'MARKER_FRAMES', 'MARKER_BURST']

# default CBS and PBS of a marker: two frames, so the refill earned
# between CBR arrivals is never capped away
MARKER_FRAMES = 2
MARKER_BURST = MARKER_FRAMES * MAX_FRAME


class TrTcmState:
	"""
	Color-blind two rate three color marker state. tc fills at cir up
	to cbs, tp at pir up to pbs. Both default to MARKER_BURST.

	committed_first tests the committed bucket before the peak bucket,
	so a CBS larger than the PBS lets whole bursts through as green.
	"""
	__slots__ = ['committed', 'peak', 'committed_first']

	def __init__(self, cir, pir, cbs = MARKER_BURST, pbs = MARKER_BURST, committed_first = False, now = 0):
		self.committed = Bucket(cir, cbs, now)
		self.peak = Bucket(pir, pbs, now)
		self.committed_first = committed_first

	@property
	def tc(self):
		return self.committed.tokens

	@property
	def tp(self):
		return self.peak.tokens

	def __repr__(self):
		return 'TrTcmState(tc={}/{}, tp={}/{})'.format(self.tc, self.committed.capacity,
														self.tp, self.peak.capacity)


class TwoColorState:
	__slots__ = ['bucket']

	def __init__(self, cir, cbs = MARKER_BURST, now = 0):
		self.bucket = Bucket(cir, cbs, now)

	@property
	def tokens(self):
		return self.bucket.tokens


def trtcm_mark(state, size, now):
	"""
	Red above the PIR, green under the CIR, yellow in between.
	Green takes from both buckets, yellow from the peak bucket only.
	"""
	c, p = state.committed, state.peak
	c.refill(now)
	p.refill(now)

	if state.committed_first:
		if c.tokens >= size:
			c.tokens -= size
			p.tokens = max(p.tokens - size, 0)
			return Color.Green
		if p.tokens >= size:
			p.tokens -= size
			return Color.Yellow
		return Color.Red

	if p.tokens < size:
		return Color.Red
	if c.tokens >= size:
		c.tokens -= size
		p.tokens -= size
		return Color.Green
	p.tokens -= size
	return Color.Yellow


def two_color_mark(state, size, now):
	"""Green when the packet conforms to the CIR, Red when it exceeds it."""
	b = state.bucket
	b.refill(now)
	if b.tokens >= size:
		b.tokens -= size
		return Color.Green
	return Color.Red
