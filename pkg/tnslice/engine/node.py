import logging
from ..base import INFINITE
from ..model import TnQosClass
from ..policers.htb import offer, drain, next_wake, ADMITTED, QUEUED
from ..policers.reference import ietf_ingress, lin_ingress, PASS, DEPRIORITIZED, HIGH, LOW
from .events import POLICER_WAKE

__all__ = ['Port', 'Node', 'Forwarder', 'Sink', 'EdgeNode', 'DropCounter',
			'HctnsIngress', 'IetfIngress', 'LinIngress']

logger = logging.getLogger(__name__)


class DropCounter:
	"""Stands in for a queue that never holds packets, e.g. a marker."""
	__slots__ = ['name', 'drops']

	def __init__(self, name):
		self.name = name
		self.drops = 0

	def __len__(self):
		return 0


class Port:
	"""
	An output port: a queueing discipline in front of one link.
	push(queue, pkt) -> bool stores a packet, pull(queue) -> packet or
	None picks the next one to send.
	"""
	__slots__ = ['owner', 'queue', 'link', 'push', 'pull', 'peer']

	def __init__(self, owner, queue, link, push, pull, peer = None):
		self.owner = owner
		self.queue = queue
		self.link = link
		self.push = push
		self.pull = pull
		self.peer = peer


class Node:
	def __init__(self, name, sim):
		self.name = name
		self.sim = sim
		self.received = 0
		self.forwarded = 0
		self.dropped = 0

	def resident(self):
		return 0

	def counters(self):
		return dict(received = self.received, forwarded = self.forwarded,
					dropped = self.dropped, resident = self.resident())


class Forwarder(Node):
	"""gNB, P and PE2: everything received goes straight to the output port."""
	def __init__(self, name, sim):
		super().__init__(name, sim)
		self.port = None

	def receive(self, pkt, now):
		self.received += 1
		self.sim.send(self.port, pkt, now)

	def resident(self):
		return len(self.port.queue)


class Sink(Node):
	"""The UPF. Every packet that gets here is delivered."""
	def __init__(self, name, sim):
		super().__init__(name, sim)
		self.delivered_bytes = 0

	def receive(self, pkt, now):
		self.received += 1
		self.delivered_bytes += pkt.size
		self.forwarded += 1
		pkt.delivered_at = now
		self.sim.deliver(pkt, now)


class EdgeNode(Forwarder):
	"""
	The ingress PE. Packets are classified, policed by the ingress
	model and, once admitted, cross the switching fabric instantly into
	the egress bank.
	"""
	def __init__(self, name, sim, table, ingress):
		super().__init__(name, sim)
		self.table = table
		self.ingress = ingress
		ingress.node = self

	def receive(self, pkt, now):
		self.received += 1
		entry = self.sim.classify(pkt)
		pkt.slice, pkt.cls, pkt.tn_class = entry.slice, entry.cls, entry.tn_class
		if self.ingress.admit(pkt, now):
			pkt.admitted_at = now
			self.sim.send(self.port, pkt, now)

	def resident(self):
		return len(self.port.queue) + self.ingress.queued()


class Ingress:
	node = None

	def queued(self):
		return 0

	def queue_ids(self):
		return []


class HctnsIngress(Ingress):
	"""
	The hierarchical policer. Packets it cannot admit wait in their
	leaf queue and are released by PolicerWake events scheduled at the
	exact instant tokens suffice. A newer wake makes older ones stale.
	"""
	def __init__(self, sim, tree):
		self.sim = sim
		self.tree = tree
		self.wake_at = INFINITE
		self.generation = 0

	def admit(self, pkt, now):
		status, _ = offer(self.tree, (pkt.slice, pkt.cls), pkt, now)
		if status == ADMITTED:
			return True
		if status == QUEUED:
			if len(self.tree.leaf((pkt.slice, pkt.cls)).queue) == 1:
				self.reschedule(now)
		else:
			self.node.dropped += 1
			leaf = self.tree.leaf((pkt.slice, pkt.cls))
			if leaf.dropped == 1:
				logger.info('%s: policer queue %s overflowed at t=%.3f s',
							self.node.name, leaf.name, now / 1e9)
		return False

	def reschedule(self, now):
		t = next_wake(self.tree, now)
		if t < self.wake_at:
			self.generation += 1
			self.wake_at = t
			self.sim.events.at(t, POLICER_WAKE, self, self.generation)

	def wake(self, generation, now):
		if generation != self.generation:
			return
		self.wake_at = INFINITE
		node, sim = self.node, self.sim
		for pkt, _ in drain(self.tree, now):
			pkt.admitted_at = now
			sim.send(node.port, pkt, now)
		self.reschedule(now)

	def queued(self):
		return self.tree.queued()

	def queue_ids(self):
		return [('{}/htb/{}'.format(self.node.name, name), leaf)
				for name, leaf in self.tree.queue_ids()]


class IetfIngress(Ingress):
	"""
	slices: slice -> TrTcmState or None (no slice policer)
	classes: (slice, class) -> TwoColorState or None (best effort)
	"""
	def __init__(self, slices, classes):
		self.slices = slices
		self.classes = classes
		self.drops = {key: DropCounter('{}/{}'.format(*key)) for key in classes}

	def admit(self, pkt, now):
		key = (pkt.slice, pkt.cls)
		action, tn, color = ietf_ingress(self.slices.get(pkt.slice),
										self.classes.get(key), pkt, now)
		pkt.color = color
		if action == PASS:
			return True
		if action == DEPRIORITIZED:
			pkt.tn_class = tn
			return True
		self.drops[key].drops += 1
		self.node.dropped += 1
		return False

	def queue_ids(self):
		return [('{}/marker/{}'.format(self.node.name, counter.name), counter)
				for _, counter in sorted(self.drops.items())]


class LinIngress(Ingress):
	"""
	flows: flow -> TrTcmState, or None for best effort. Green goes to
	the high priority queue (TN class A), everything else that is not
	red to the low one (TN class B).
	"""
	def __init__(self, flows):
		self.flows = flows
		self.drops = {flow: DropCounter(flow) for flow in flows}

	def admit(self, pkt, now):
		action, color = lin_ingress(self.flows.get(pkt.flow), pkt, now)
		pkt.color = color
		if action == HIGH:
			pkt.tn_class = TnQosClass.A
			return True
		if action == LOW:
			pkt.tn_class = TnQosClass.B
			return True
		self.drops[pkt.flow].drops += 1
		self.node.dropped += 1
		return False

	def queue_ids(self):
		return [('{}/marker/{}'.format(self.node.name, flow), counter)
				for flow, counter in sorted(self.drops.items())]
