from collections import namedtuple
from copy import deepcopy
import json
import logging
import os
import warnings
import yaml
from .base import MAX_FRAME, SAMPLE_INTERVAL, GNB_LINK_RATE, BOTTLENECK_RATE, \
				GNB_QUEUE_CAP_DEFAULT, SECOND, INFINITE, isDict, isList, rate, size, duration, \
				serialization
from .exceptions import ParseError, ValidationError, UnknownPair
from .model import MappingTable
from .engine.traffic import Burst, FlowGen
from .policers.htb import build_tree
from .policers.reference import build_ietf, build_lin
from .sched.bank import build_bank, DEFAULT_BANK, LIN_BANK
from .sched.hier import build_hier

__all__ = ['Scenario', 'FlowSpec', 'from_dict', 'load_scenario', 'validate',
			'MODELS', 'LINKS']

logger = logging.getLogger(__name__)

MODELS = ('hctns', 'ietf', 'lin')
LINKS = {
	'gnb_pe1': GNB_LINK_RATE,
	'pe1_p': BOTTLENECK_RATE,
	'p_pe2': GNB_LINK_RATE,
	'pe2_upf': GNB_LINK_RATE,
}
SECTIONS = ('name', 'model', 'duration', 'sample_interval', 'frame', 'topology',
			'policer', 'banks', 'flows', 'mapping', 'schedule', 'intervals')

FlowSpec = namedtuple('FlowSpec', ['name', 'slice', 'cls', 'rate', 'frame', 'burst'])


class Scenario:
	"""
	A parsed scenario. Times are in ns, rates in bps and sizes in
	bytes, except intervals which stay in seconds as they only label
	results. doc keeps the source document.
	"""
	def __init__(self, name, model, duration, sample_interval, frame, links,
				gnb_queue_cap, table, policer, banks, flows, schedule, intervals, doc):
		self.name = name
		self.model = model
		self.duration = duration
		self.sample_interval = sample_interval
		self.frame = frame
		self.links = links
		self.gnb_queue_cap = gnb_queue_cap
		self.table = table
		self.policer = policer
		self.banks = banks
		self.flows = flows
		self.schedule = schedule
		self.intervals = intervals
		self.doc = doc

	def gens(self):
		out = []
		for f in self.flows:
			periods = self.schedule.get(f.name, ((0, self.duration),))
			out.append(FlowGen(f.name, f.slice, f.cls, f.rate, f.frame, periods, f.burst))
		return out

	def __repr__(self):
		return 'Scenario({}, model={}, {} flows, {} s)'.format(
			self.name, self.model, len(self.flows), self.duration / SECOND)


def _field(doc, key, where, required = False, default = None):
	if key not in doc or doc[key] is None:
		if required:
			raise ParseError('Missing required field', field = where + key)
		return default
	return doc[key]


def _convert(parse, value, field):
	try:
		return parse(value)
	except (ValueError, TypeError) as error:
		raise ParseError(str(error), field = field)


def _links(topology):
	if not isDict(topology):
		raise ParseError('topology must be a mapping', field = 'topology')
	links = {}
	for key, default in LINKS.items():
		spec = topology.get(key) or {}
		if not isDict(spec):
			spec = {'rate': spec}
		where = 'topology.{}'.format(key)
		bps = _convert(rate, spec.get('rate', default), where + '.rate')
		if bps <= 0:
			raise ValidationError('Link {} needs a positive rate.'.format(key))
		prop = _convert(duration, spec.get('propagation', 0), where + '.propagation')
		links[key] = (bps, prop)
	for key in topology:
		if key not in LINKS and key != 'gnb_queue_cap':
			raise ValidationError('Unknown link {!r}. Links are {}.'.format(key, ', '.join(LINKS)))
	return links


def _mapping(spec):
	if not isDict(spec) or not isList(spec.get('entries')):
		raise ParseError('mapping needs a list of entries', field = 'mapping.entries')
	entries = []
	for i, e in enumerate(spec['entries']):
		where = 'mapping.entries[{}]'.format(i)
		if not isDict(e):
			raise ParseError('mapping entries must be mappings', field = where)
		for key in ('slice', 'class', 'dscp', 'tn_class'):
			if e.get(key) is None:
				raise ParseError('Missing required field', field = '{}.{}'.format(where, key))
		entries.append((e['slice'], e['class'], e.get('five_qi'), int(e['dscp']), e['tn_class']))
	return MappingTable(entries, spec.get('vlans'), spec.get('defaults'))


def _flows(spec, frame, table):
	if not isList(spec):
		raise ParseError('flows must be a list', field = 'flows')
	flows = []
	for i, f in enumerate(spec):
		where = 'flows[{}].'.format(i)
		if not isDict(f):
			raise ParseError('flows must be mappings', field = where[:-1])
		name = _field(f, 'name', where, required = True)
		slice = _field(f, 'slice', where, required = True)
		cls = f.get('class')
		if cls is None:
			cls = table.defaults.get(slice)
		if (slice, cls) not in table.pairs:
			raise UnknownPair(slice, cls)
		bps = _convert(rate, _field(f, 'rate', where, default = 0), where + 'rate')
		fsize = _convert(size, _field(f, 'frame', where, default = frame), where + 'frame')
		if fsize <= 0:
			raise ValidationError('Flow {} needs a positive frame size.'.format(name))

		burst = f.get('burst')
		if burst is not None:
			if not isDict(burst):
				raise ParseError('burst must be a mapping', field = where + 'burst')
			bwhere = where + 'burst.'
			burst = Burst(
				_convert(size, _field(burst, 'size', bwhere, required = True), bwhere + 'size'),
				_convert(duration, _field(burst, 'period', bwhere, required = True), bwhere + 'period'),
				_convert(duration, _field(burst, 'first_at', bwhere, default = 0), bwhere + 'first_at'),
				_convert(duration, burst['until'], bwhere + 'until') if burst.get('until') is not None
					else INFINITE,
				_convert(rate, burst['rate'], bwhere + 'rate') if burst.get('rate') is not None
					else None)
			if burst.period <= 0:
				raise ValidationError('Flow {} needs a positive burst period.'.format(name))
			if burst.rate is not None:
				if burst.rate <= 0:
					raise ValidationError('Flow {} needs a positive burst rate.'.format(name))
				if serialization(burst.size, burst.rate) >= burst.period:
					raise ValidationError('A burst of flow {} lasts longer than its period.'.format(name))
		if bps == 0 and burst is None:
			warnings.warn('Flow {} has no rate and no bursts and will send nothing.'.format(name))
		flows.append(FlowSpec(name, slice, cls, bps, fsize, burst))

	names = [f.name for f in flows]
	if len(set(names)) != len(names):
		raise ValidationError('Flow names must be unique.')
	return flows


def _schedule(spec, flows, end):
	if spec is None:
		return {}
	if not isDict(spec):
		raise ParseError('schedule must be a mapping of flow to spans', field = 'schedule')
	out = {}
	for name, spans in spec.items():
		if name not in flows:
			raise ValidationError('The schedule names unknown flow {!r}.'.format(name))
		where = 'schedule.{}'.format(name)
		if not isList(spans) or any(not isList(s) or len(s) != 2 for s in spans):
			raise ParseError('spans must be [start, stop] pairs', field = where)
		periods = []
		for a, b in spans:
			a = _convert(duration, a, where)
			b = _convert(duration, b, where)
			if b < a:
				raise ValidationError('Span [{}, {}) of {} ends before it starts.'.format(
					a / SECOND, b / SECOND, name))
			if a >= end:
				continue
			periods.append((a, min(b, end)))
		out[name] = sorted(periods)
	return out


def from_dict(doc):
	"""
	Builds and validates a Scenario from a document with the sections
	name, model, duration, sample_interval, frame, topology, mapping,
	policer, banks, flows, schedule and intervals. See the README for
	every key.
	"""
	if not isDict(doc):
		raise ParseError('A scenario must be a mapping of sections')
	for key in doc:
		if key not in SECTIONS:
			raise ParseError('Unknown section', field = key)
	doc = deepcopy(doc)

	model = _field(doc, 'model', '', required = True)
	if model not in MODELS:
		raise ValidationError('Unknown model {!r}. Use one of {}.'.format(model, ', '.join(MODELS)))
	end = _convert(duration, _field(doc, 'duration', '', required = True), 'duration')
	if end <= 0:
		raise ValidationError('The duration must be positive.')
	interval = _convert(duration, _field(doc, 'sample_interval', '', default = SAMPLE_INTERVAL / SECOND),
						'sample_interval')
	if interval <= 0:
		raise ValidationError('The sample interval must be positive.')
	frame = _convert(size, _field(doc, 'frame', '', default = MAX_FRAME), 'frame')

	topology = _field(doc, 'topology', '', default = {})
	links = _links(topology)
	gnb_cap = int(topology.get('gnb_queue_cap', GNB_QUEUE_CAP_DEFAULT))

	table = _mapping(_field(doc, 'mapping', '', required = True))
	flows = _flows(_field(doc, 'flows', '', default = []), frame, table)
	schedule = _schedule(doc.get('schedule'), set(f.name for f in flows), end)

	banks = _field(doc, 'banks', '', default = {})
	if not isDict(banks):
		raise ParseError('banks must be a mapping', field = 'banks')
	for key in banks:
		if key not in ('PE1', 'P', 'PE2'):
			raise ValidationError('Unknown bank {!r}. Banks are PE1, P and PE2.'.format(key))

	intervals = [(float(a), float(b)) for a, b in doc.get('intervals') or []]
	scenario = Scenario(doc.get('name') or 'scenario', model, end, interval, frame, links,
						gnb_cap, table, _field(doc, 'policer', '', default = {}), banks,
						flows, schedule, intervals, doc)
	return validate(scenario)


def validate(scenario):
	"""
	Builds the policer and the banks once so every configuration error
	shows up before a run starts. Returns the scenario.
	"""
	s = scenario
	if s.model == 'hctns':
		tree = build_tree(s.policer, s.frame)
		for f in s.flows:
			tree.leaf((f.slice, f.cls))
		total = sum(n.cir.rate for n in tree.root.children)
		if total > s.links['pe1_p'][0]:
			warnings.warn('Slice CIRs sum to {} bps, more than the {} bps bottleneck. CIRs '
						'cannot all be met.'.format(total, s.links['pe1_p'][0]))
	elif s.model == 'ietf':
		build_ietf(s.policer, s.table, s.frame)
	else:
		build_lin(s.policer, [f.name for f in s.flows], s.frame)

	default = LIN_BANK if s.model == 'lin' else DEFAULT_BANK
	pe1 = build_bank('PE1', s.banks.get('PE1') or default)
	build_bank('P', s.banks.get('P') or s.banks.get('PE1') or default)
	build_hier('PE2', s.table, s.banks.get('PE2'))
	for e in s.table.entries:
		if s.model != 'lin':
			pe1.queue_of(e.tn_class)
	return scenario


"""
------------------------------------------------------------
Files
	>>> .yaml / .yml are read with yaml.safe_load
	>>> .json with json.load
Updated 19/10/2026
------------------------------------------------------------
"""
def load_scenario(path):
	"""
	Reads, parses and validates a scenario file. Raises ParseError
	(with the line when the parser knows it) or ValidationError.
	"""
	ext = os.path.splitext(path)[1].lower()
	with open(path) as f:
		text = f.read()

	if ext == '.json':
		try:
			doc = json.loads(text)
		except json.JSONDecodeError as error:
			raise ParseError(error.msg, line = error.lineno)
	else:
		try:
			doc = yaml.safe_load(text)
		except yaml.YAMLError as error:
			mark = getattr(error, 'problem_mark', None)
			raise ParseError(getattr(error, 'problem', None) or str(error),
							line = None if mark is None else mark.line + 1)

	if isDict(doc) and doc.get('name') is None:
		doc['name'] = os.path.splitext(os.path.basename(path))[0]
	logger.info('Loaded scenario %s', path)
	return from_dict(doc)
