from collections import deque
from ..base import QUEUE_CAP_DEFAULT, QUANTUM_DEFAULT

__all__ = ['Fifo', 'DrrQueue', 'Drr']


class Fifo:
	"""Bounded drop-tail packet FIFO."""
	__slots__ = ['name', 'cap', 'packets', 'drops', 'enqueued']

	def __init__(self, name, cap = QUEUE_CAP_DEFAULT):
		self.name = name
		self.cap = cap
		self.packets = deque()
		self.drops = 0
		self.enqueued = 0

	def push(self, pkt):
		if len(self.packets) >= self.cap:
			self.drops += 1
			return False
		self.packets.append(pkt)
		self.enqueued += 1
		return True

	def pop(self):
		return self.packets.popleft()

	def head_size(self):
		return self.packets[0].size

	def __len__(self):
		return len(self.packets)

	def __repr__(self):
		return 'Fifo({}, {}/{})'.format(self.name, len(self.packets), self.cap)


class DrrQueue(Fifo):
	__slots__ = ['quantum', 'deficit', 'active']

	def __init__(self, name, quantum = QUANTUM_DEFAULT, cap = QUEUE_CAP_DEFAULT):
		super().__init__(name, cap)
		if quantum <= 0:
			raise ValueError('DRR quantum must be positive, got {}'.format(quantum))
		self.quantum = quantum
		self.deficit = 0
		self.active = False


class Drr:
	"""
	Deficit round robin over children that look like DrrQueue
	(quantum, deficit, active, __len__, head_size, pop).

	The head of the active list is credited its quantum once per
	visit and keeps sending while its deficit covers its head packet.
	The pointer moves on when it does not. A child that runs empty
	leaves the list and loses its deficit.

	State survives between calls, so pop() hands out one packet at a
	time in the same order a classic DRR round would.
	"""
	def __init__(self, children = ()):
		self.children = list(children)
		self.rotation = deque()
		self.credited = False

	def activate(self, child):
		if not child.active:
			child.active = True
			self.rotation.append(child)

	def _retire(self, child):
		child.active = False
		child.deficit = 0
		self.credited = False

	def peek(self):
		rotation = self.rotation
		while rotation:
			q = rotation[0]
			if len(q) == 0:
				rotation.popleft()
				self._retire(q)
				continue
			if not self.credited:
				q.deficit += q.quantum
				self.credited = True
			if q.deficit >= q.head_size():
				return q
			rotation.rotate(-1)
			self.credited = False
		return None

	def pop(self):
		q = self.peek()
		if q is None:
			return None
		pkt = q.pop()
		q.deficit -= pkt.size
		if len(q) == 0:
			self.rotation.popleft()
			self._retire(q)
		return pkt

	def __len__(self):
		return sum(len(c) for c in self.children)
