from ..base import BITS_NS, INFINITE

__all__ = ['Bucket', 'refill']


class Bucket:
	"""
	Lazy token bucket counted in bytes.

	tokens is refilled only when touched. The sub-byte remainder of
	rate * dt is kept in frac (units of bit-ns) so that long runs
	accrue exactly rate bits per second, even at 1.2 Mbps.

	tokens never exceeds capacity. It can go negative when a node is
	charged for traffic it did not fund itself (see htb.charge_ancestors).
	Buckets start full.
	"""
	__slots__ = ['capacity', 'tokens', 'rate', 'last', 'frac']

	def __init__(self, rate, capacity, now = 0):
		self.rate = int(rate)
		self.capacity = int(capacity)
		self.tokens = self.capacity
		self.last = now
		self.frac = 0


	def refill(self, now):
		dt = now - self.last
		if dt <= 0:
			return
		self.last = now
		if self.tokens >= self.capacity:
			self.frac = 0
			return

		gain, self.frac = divmod(self.frac + self.rate*dt, BITS_NS)
		tokens = self.tokens + gain
		if tokens >= self.capacity:
			tokens = self.capacity
			self.frac = 0
		self.tokens = tokens


	def time_until(self, n):
		"""
		Nanoseconds after last update until the bucket holds at least
		n bytes, assuming nothing else is taken out. INFINITE when the
		bucket can never get there.
		"""
		if self.tokens >= n:
			return 0
		if n > self.capacity or self.rate <= 0:
			return INFINITE
		need = (n - self.tokens)*BITS_NS - self.frac
		return -(-need // self.rate)


	def __repr__(self):
		return 'Bucket(tokens={}/{}, rate={})'.format(self.tokens, self.capacity, self.rate)



def refill(bucket, now):
	if now < bucket.last:
		raise ValueError('Cannot refill backwards in time ({} < {})'.format(now, bucket.last))
	bucket.refill(now)
