from ..base import serialization

__all__ = ['Link']


class Link:
	"""
	Point to point link. One frame on the wire at a time: a frame
	that starts at t is fully received at t + size*8/rate + propagation
	and the wire is free again at t + size*8/rate.
	"""
	__slots__ = ['name', 'rate', 'propagation', 'busy_until', 'sent', 'sent_bytes']

	def __init__(self, name, rate, propagation = 0):
		if rate <= 0:
			raise ValueError('Link {} needs a positive rate.'.format(name))
		self.name = name
		self.rate = rate
		self.propagation = propagation
		self.busy_until = 0
		self.sent = 0
		self.sent_bytes = 0

	def busy(self, now):
		return self.busy_until > now

	def transmit(self, pkt, now):
		"""Returns (free_at, arrives_at)."""
		if self.busy_until > now:
			raise RuntimeError('Link {} is still busy until {}'.format(self.name, self.busy_until))
		free = now + serialization(pkt.size, self.rate)
		self.busy_until = free
		self.sent += 1
		self.sent_bytes += pkt.size
		return free, free + self.propagation

	def __repr__(self):
		return 'Link({}, {} bps)'.format(self.name, self.rate)
