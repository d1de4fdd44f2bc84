import logging
import warnings
from ..base import SECOND, RAW_LATENCY_DEFAULT
from ..metrics import MetricsStore, record_delivery
from ..model import Packet, classify
from ..multiprocessing import ParallelReference
from ..policers.htb import build_tree
from ..policers.reference import build_ietf, build_lin
from ..sched.bank import build_bank, bank_enqueue, bank_dequeue, ENQUEUED, DEFAULT_BANK, LIN_BANK
from ..sched.drr import Fifo
from ..sched.hier import build_hier, hier_enqueue, hier_dequeue
from .events import EventQueue, ARRIVAL, POLICER_WAKE, LINK_FREE, GEN_TICK, SAMPLE_TICK, END
from .link import Link
from .node import Port, Forwarder, Sink, EdgeNode, HctnsIngress, IetfIngress, LinIngress

__all__ = ['Simulation', 'run', 'run_many', 'check_conservation']

logger = logging.getLogger(__name__)

# expected packet count above which raw latency recording gets a warning
RAW_WARN_PACKETS = 10**7


def _fifo_push(queue, pkt):
	return queue.push(pkt)


def _fifo_pull(queue):
	return queue.pop() if queue.packets else None


def _bank_push(bank, pkt):
	return bank_enqueue(bank, pkt) == ENQUEUED


class Simulation:
	"""
	One run of a scenario over gNB -> PE1 -> P -> PE2 -> UPF.

	Every output port is a queueing discipline in front of a link.
	PE1 classifies and polices, then hands admitted packets to its bank
	through an instant switching fabric. Time is an integer count of
	ns and events at the same instant run in scheduling order, so a
	scenario always replays identically.
	"""
	def __init__(self, scenario, raw_latency = RAW_LATENCY_DEFAULT):
		s = scenario
		self.scenario = s
		self.table = s.table
		self.events = EventQueue()
		self.store = MetricsStore(s.name, [f.name for f in s.flows], s.duration,
								s.sample_interval, raw_latency)
		self.generated = 0
		self._classes = {}
		self._flows = {}
		self._gens = {}
		self._build()

	def _link(self, key, name):
		rate, propagation = self.scenario.links[key]
		return Link(name, rate, propagation)

	def _ingress(self):
		s = self.scenario
		if s.model == 'hctns':
			self.tree = build_tree(s.policer, s.frame)
			return HctnsIngress(self, self.tree)
		if s.model == 'ietf':
			return IetfIngress(*build_ietf(s.policer, s.table, s.frame))
		return LinIngress(build_lin(s.policer, [f.name for f in s.flows], s.frame))

	def _build(self):
		s = self.scenario
		default = LIN_BANK if s.model == 'lin' else DEFAULT_BANK
		pe1_spec = s.banks.get('PE1') or default

		gnb = Forwarder('gNB', self)
		pe1 = EdgeNode('PE1', self, s.table, self._ingress())
		p = Forwarder('P', self)
		pe2 = Forwarder('PE2', self)
		upf = Sink('UPF', self)

		gnb.port = Port(gnb, Fifo('gNB', s.gnb_queue_cap), self._link('gnb_pe1', 'gNB-PE1'),
						_fifo_push, _fifo_pull, pe1)
		pe1.port = Port(pe1, build_bank('PE1', pe1_spec), self._link('pe1_p', 'PE1-P'),
						_bank_push, bank_dequeue, p)
		p.port = Port(p, build_bank('P', s.banks.get('P') or pe1_spec), self._link('p_pe2', 'P-PE2'),
						_bank_push, bank_dequeue, pe2)
		pe2.port = Port(pe2, build_hier('PE2', s.table, s.banks.get('PE2')),
						self._link('pe2_upf', 'PE2-UPF'), hier_enqueue, hier_dequeue, upf)

		self.gnb, self.pe1, self.p, self.pe2, self.upf = gnb, pe1, p, pe2, upf
		self.nodes = [gnb, pe1, p, pe2, upf]

		store = self.store
		store.register('gNB', gnb.port.queue)
		for qid, q in pe1.ingress.queue_ids():
			store.register(qid, q)
		for node in (pe1, p, pe2):
			for qid, q in node.port.queue.queue_ids():
				store.register(qid, q)

		for f in s.flows:
			entry = s.table.entry(f.slice, f.cls)
			self._flows[f.name] = (s.table.vlan_of(f.slice), entry.dscp_in)

	# hooks the nodes call
	def classify(self, pkt):
		key = (pkt.vlan, pkt.dscp)
		entry = self._classes.get(key)
		if entry is None:
			entry = self.table.entry(*classify(pkt, self.table))
			self._classes[key] = entry
		return entry

	def send(self, port, pkt, now):
		"""Queues pkt on port and starts the link if it is idle."""
		if not port.push(port.queue, pkt):
			port.owner.dropped += 1
			return False
		if not port.link.busy(now):
			self._start(port, now)
		return True

	def _start(self, port, now):
		# an arrival at the instant the wire frees may have restarted it already
		if port.link.busy(now):
			return
		pkt = port.pull(port.queue)
		if pkt is None:
			return
		port.owner.forwarded += 1
		free, arrives = port.link.transmit(pkt, now)
		self.events.at(free, LINK_FREE, port)
		self.events.at(arrives, ARRIVAL, port.peer, pkt)

	def deliver(self, pkt, now):
		record_delivery(self.store, pkt, now)

	def _emit(self, flow, frames, now):
		vlan, dscp = self._flows[flow]
		gnb = self.gnb
		for nbytes in frames:
			pkt = Packet(self.generated, flow, nbytes, vlan, dscp, now)
			self.generated += 1
			gnb.receive(pkt, now)
		self._next_tick(flow)

	def _next_tick(self, flow):
		try:
			t, frames = next(self._gens[flow])
		except StopIteration:
			return
		self.events.at(t, GEN_TICK, flow, frames)

	def _schedule(self):
		s = self.scenario
		interval = s.sample_interval
		expected = 0
		for k in range(1, self.store.n_windows + 1):
			self.events.at(min(k * interval, s.duration), SAMPLE_TICK)
		for gen in s.gens():
			self._gens[gen.flow] = gen.times(s.duration)
			self._next_tick(gen.flow)
			expected += gen.rate * s.duration // (8 * gen.frame * SECOND)
		if self.store.raw and expected > RAW_WARN_PACKETS:
			warnings.warn('Raw latency recording keeps one record for each of about {} '
						'packets.'.format(expected))
		self.events.at(s.duration, END)

	def _progress(self, now):
		t = now / SECOND
		for start, stop in self.scenario.intervals:
			if abs(stop - t) < 1e-9:
				logger.info('%s: interval [%g, %g) s done, %d packets delivered',
							self.scenario.name, start, stop, len(self.store))

	def run(self):
		"""Runs to the scenario duration and returns the finalized MetricsStore."""
		s = self.scenario
		logger.info('Running %s (%s model, %g s, %d flows)', s.name, s.model,
					s.duration / SECOND, len(s.flows))
		self._schedule()
		events = self.events
		store = self.store

		while events:
			e = events.pop()
			kind = e.kind
			if kind == ARRIVAL:
				e.target.receive(e.data, e.time)
			elif kind == LINK_FREE:
				self._start(e.target, e.time)
			elif kind == GEN_TICK:
				self._emit(e.target, e.data, e.time)
			elif kind == POLICER_WAKE:
				e.target.wake(e.data, e.time)
			elif kind == SAMPLE_TICK:
				store.sample(e.time)
				self._progress(e.time)
			elif kind == END:
				break

		store.counters = {n.name: n.counters() for n in self.nodes}
		store.counters['UPF']['bytes'] = self.upf.delivered_bytes
		store.generated = self.generated
		store.events = events.processed
		store.finalize()
		logger.info('Finished %s at t=%g s: %d events, %d of %d packets delivered',
					s.name, events.now / SECOND, events.processed, len(store), self.generated)
		return store


def run(scenario, raw_latency = RAW_LATENCY_DEFAULT):
	return Simulation(scenario, raw_latency).run()


def _run_one(scenario, raw_latency):
	return run(scenario, raw_latency)


def run_many(scenarios, n_jobs = 1, raw_latency = RAW_LATENCY_DEFAULT):
	"""
	Runs independent scenarios, n_jobs at a time in separate
	processes. Returns the stores in input order.
	"""
	return ParallelReference(_run_one, n_jobs = n_jobs, reference = 0)(list(scenarios), raw_latency)


def check_conservation(store):
	"""
	Every node must account for every packet it received:
	received = forwarded + dropped + resident. Returns the nodes that
	do not, as {node: counters}.
	"""
	bad = {}
	for name, c in store.counters.items():
		if c['received'] != c['forwarded'] + c['dropped'] + c['resident']:
			bad[name] = c
	if store.counters['gNB']['received'] != store.generated:
		bad.setdefault('gNB', store.counters['gNB'])
	return bad
