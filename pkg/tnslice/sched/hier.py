from ..base import QUEUE_CAP_DEFAULT, QUANTUM_DEFAULT, isDict, size
from ..exceptions import ValidationError
from .drr import DrrQueue, Drr

__all__ = ['SliceDrr', 'HierDrrBank', 'build_hier', 'hier_enqueue', 'hier_dequeue']


class SliceDrr(Drr):
	"""
	A slice as seen by the outer round: a DRR over its own classes
	that also carries the quantum and deficit of the outer level.
	"""
	def __init__(self, name, quantum, classes):
		super().__init__(classes)
		self.name = name
		self.quantum = quantum
		self.deficit = 0
		self.active = False

	def head_size(self):
		return self.peek().head_size()


class HierDrrBank:
	"""
	Two level DRR of the egress PE: the outer round picks a slice,
	the inner round picks a class of that slice.
	"""
	def __init__(self, name, slices):
		self.name = name
		self.outer = Drr(slices)
		self.route = {}
		for s in slices:
			for q in s.children:
				self.route[(s.name, q.name)] = (s, q)

	def __len__(self):
		return len(self.outer)

	def queue_ids(self):
		out = []
		for s in self.outer.children:
			for q in s.children:
				out.append(('{}/{}/{}'.format(self.name, s.name, q.name), q))
		return out


def build_hier(name, table, spec = None):
	"""
	Builds the egress PE bank from the mapping table: one outer entry
	per slice, one inner queue per class. spec may override quanta
	and capacities:
		{'queue_cap': 1000,
		 'slices': {'ToD': {'quantum': 3076, 'classes': {'Video': 1538}}}}
	"""
	spec = spec or {}
	if not isDict(spec):
		raise ValidationError('Bank {} must be a mapping.'.format(name))
	cap = int(spec.get('queue_cap', QUEUE_CAP_DEFAULT))
	custom = spec.get('slices') or {}
	for s in custom:
		if s not in table.dscp:
			raise ValidationError('Bank {} configures unknown slice {!r}.'.format(name, s))

	def _quantum(value, where):
		if isDict(value):
			value = value.get('quantum', QUANTUM_DEFAULT)
		try:
			q = size(value)
		except ValueError as error:
			raise ValidationError('Bank {} {}: {}'.format(name, where, error))
		if q <= 0:
			raise ValidationError('Bank {} {}: quantum must be positive.'.format(name, where))
		return q

	slices = []
	for s in table.slices:
		sspec = custom.get(s) or {}
		cspec = sspec.get('classes') or {} if isDict(sspec) else {}
		classes = []
		for e in table.entries:
			if e.slice != s:
				continue
			value = cspec.get(e.cls, QUANTUM_DEFAULT)
			qcap = value.get('queue_cap', cap) if isDict(value) else cap
			classes.append(DrrQueue(e.cls, _quantum(value, '{}/{}'.format(s, e.cls)), int(qcap)))
		slices.append(SliceDrr(s, _quantum(sspec or QUANTUM_DEFAULT, s), classes))
	return HierDrrBank(name, slices)


def hier_enqueue(bank, pkt):
	try:
		s, q = bank.route[(pkt.slice, pkt.cls)]
	except KeyError:
		raise ValidationError('Bank {} has no queue for ({!r}, {!r}).'.format(
			bank.name, pkt.slice, pkt.cls))
	if not q.push(pkt):
		return False
	s.activate(q)
	bank.outer.activate(s)
	return True


def hier_dequeue(bank):
	return bank.outer.pop()
