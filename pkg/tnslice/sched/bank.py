from ..base import QUEUE_CAP_DEFAULT, QUANTUM_DEFAULT, isDict, isList, size
from ..exceptions import ValidationError
from ..model import TnQosClass, tn_class
from .drr import Fifo, DrrQueue, Drr

__all__ = ['QueueBank', 'build_bank', 'bank_enqueue', 'bank_dequeue',
			'ENQUEUED', 'DROPPED', 'DEFAULT_BANK', 'LIN_BANK']

ENQUEUED, DROPPED = 'Enqueued', 'Dropped'

DEFAULT_BANK = {
	'priority': ['A'],
	'drr': {'B': {'quantum': QUANTUM_DEFAULT},
			'C': {'quantum': QUANTUM_DEFAULT},
			'D': {'quantum': QUANTUM_DEFAULT}},
}

LIN_BANK = {
	'priority': [{'name': 'high', 'classes': ['A']},
				 {'name': 'low', 'classes': ['B', 'C', 'D']}],
}


class QueueBank:
	"""
	Output port structure of PE1 and P: strict priority FIFOs, highest
	first, then one DRR round over the remaining TN classes. A DRR
	queue is only served while every priority FIFO is empty.
	"""
	def __init__(self, name, priority, drr):
		self.name = name
		self.priority = [q for q, _ in priority]
		self.drr = Drr([q for q, _ in drr])
		self.route = {}
		for q, classes in list(priority) + list(drr):
			for c in classes:
				if c in self.route:
					raise ValidationError('Bank {}: TN class {} is served by two '
										'queues.'.format(name, c.name))
				self.route[c] = q
		self.queues = self.priority + self.drr.children
		self.drr_route = set(self.drr.children)

	def queue_of(self, cls):
		try:
			return self.route[cls]
		except KeyError:
			raise ValidationError('Bank {} has no queue for TN class {}.'.format(
				self.name, getattr(cls, 'name', cls)))

	def __len__(self):
		return sum(len(q) for q in self.queues)

	def queue_ids(self):
		return [('{}/{}'.format(self.name, q.name), q) for q in self.queues]


def _classes(spec):
	if isDict(spec):
		classes = spec.get('classes')
		if classes is None:
			raise ValidationError('A priority level mapping needs classes.')
		name = spec.get('name')
	else:
		classes, name = spec, None
	if not isList(classes):
		classes = [classes]
	classes = [tn_class(c) for c in classes]
	if name is None:
		name = ''.join(c.name for c in classes)
	return name, classes


def build_bank(name, spec = None):
	"""
	spec = {'priority': ['A'], 'drr': {'B': {'quantum': 1538}, ...},
			'queue_cap': 1000}
	A priority level is a class, a list of classes or
	{'name': ..., 'classes': [...]}. Classes left out of both get no
	queue; sending such a packet is a configuration error.
	"""
	spec = DEFAULT_BANK if spec is None else spec
	if not isDict(spec):
		raise ValidationError('Bank {} must be a mapping.'.format(name))
	cap = int(spec.get('queue_cap', QUEUE_CAP_DEFAULT))

	priority = []
	for level in spec.get('priority') or []:
		qname, classes = _classes(level)
		priority.append((Fifo(qname, cap), classes))

	drr = []
	for key, q in (spec.get('drr') or {}).items():
		q = q if isDict(q) else {'quantum': q}
		c = tn_class(key)
		try:
			quantum = size(q.get('quantum', QUANTUM_DEFAULT))
		except ValueError as error:
			raise ValidationError('Bank {} class {}: {}'.format(name, c.name, error))
		if quantum <= 0:
			raise ValidationError('Bank {} class {}: quantum must be positive.'.format(name, c.name))
		drr.append((DrrQueue(c.name, quantum, int(q.get('queue_cap', cap))), [c]))

	if not priority and not drr:
		raise ValidationError('Bank {} has no queues.'.format(name))
	return QueueBank(name, priority, drr)


def bank_enqueue(bank, pkt):
	if pkt.tn_class is None:
		raise ValidationError('Packet {} reached bank {} without a TN class.'.format(pkt.id, bank.name))
	q = bank.queue_of(pkt.tn_class)
	if not q.push(pkt):
		return DROPPED
	if q in bank.drr_route:
		bank.drr.activate(q)
	return ENQUEUED


def bank_dequeue(bank):
	for q in bank.priority:
		if q.packets:
			return q.pop()
	return bank.drr.pop()
