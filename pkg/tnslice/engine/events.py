from heapq import heappush, heappop
from collections import namedtuple

__all__ = ['Event', 'EventQueue', 'ARRIVAL', 'POLICER_WAKE', 'LINK_FREE',
			'GEN_TICK', 'SAMPLE_TICK', 'END']

# kinds
ARRIVAL, POLICER_WAKE, LINK_FREE, GEN_TICK, SAMPLE_TICK, END = range(6)
KIND_NAMES = ('Arrival', 'PolicerWake', 'LinkFree', 'GenTick', 'SampleTick', 'End')

Event = namedtuple('Event', ['time', 'seq', 'kind', 'target', 'data'])


class EventQueue:
	"""
	Calendar of pending events ordered by (time, seq). seq is handed
	out in scheduling order so simultaneous events always replay the
	same way.
	"""
	def __init__(self):
		self.heap = []
		self.seq = 0
		self.now = 0
		self.processed = 0

	def at(self, time, kind, target = None, data = None):
		if time < self.now:
			raise ValueError('Cannot schedule {} in the past ({} < {})'.format(
				KIND_NAMES[kind], time, self.now))
		self.seq += 1
		heappush(self.heap, Event(time, self.seq, kind, target, data))

	def pop(self):
		event = heappop(self.heap)
		self.now = event.time
		self.processed += 1
		return event

	def __len__(self):
		return len(self.heap)

	def __bool__(self):
		return bool(self.heap)
