from copy import deepcopy
from .base import MAX_FRAME
from .exceptions import ValidationError
from .policers.markers import MARKER_BURST
from .scenario import from_dict

__all__ = ['PRESETS', 'preset', 'preset_dict', 'list_presets', 'scale_doc',
			'MAPPING', 'EXP_A_SCHEDULE', 'EXP_A_INTERVALS', 'EXP_C_INTERVALS']

"""
------------------------------------------------------------
Shared tables
	>>> Three slices: URLLC (one class), ToD (Video, Telemetry)
		and eMBB (VC, BE with BE as the default class).
	>>> Every flow sends 1538 B frames.
Updated 19/10/2026
------------------------------------------------------------
"""
MAPPING = {
	'defaults': {'eMBB': 'BE'},
	'entries': [
		{'slice': 'URLLC', 'class': 'URLLC', 'five_qi': 82, 'dscp': 46, 'tn_class': 'A'},
		{'slice': 'ToD', 'class': 'Video', 'five_qi': 130, 'dscp': 38, 'tn_class': 'B'},
		{'slice': 'ToD', 'class': 'Telemetry', 'five_qi': 131, 'dscp': 28, 'tn_class': 'C'},
		{'slice': 'eMBB', 'class': 'VC', 'five_qi': 2, 'dscp': 28, 'tn_class': 'C'},
		{'slice': 'eMBB', 'class': 'BE', 'five_qi': 9, 'dscp': 0, 'tn_class': 'D'},
	],
}

FLOWS = (('URLLC', 'URLLC', 'URLLC'), ('Video', 'ToD', 'Video'),
		('Telemetry', 'ToD', 'Telemetry'), ('VC', 'eMBB', 'VC'), ('BE', 'eMBB', 'BE'))

EXP_A_SCHEDULE = {
	'BE': [[0, 100]],
	'Video': [[20, 60]],
	'Telemetry': [[20, 80]],
	'URLLC': [[40, 80]],
	'VC': [[40, 70]],
}
EXP_A_INTERVALS = [[0, 20], [20, 40], [40, 60], [60, 70], [70, 80], [80, 100]]
EXP_C_INTERVALS = [[0, 10], [10, 45], [45, 60]]

# guaranteed rates, shared by every model
CIR = {'URLLC': '1.2 Mbps', 'Video': '32 Mbps', 'Telemetry': '4 Mbps', 'VC': '52.8 Mbps'}
SLICE_CIR = {'URLLC': '1.2 Mbps', 'ToD': '36 Mbps', 'eMBB': '52.8 Mbps'}
PEAK = '100 Mbps'


def _bank(b, c, d):
	return {'priority': ['A'], 'drr': {'B': {'quantum': b}, 'C': {'quantum': c}, 'D': {'quantum': d}}}


def _doc(name, model, policer, duration, flows, schedule, intervals, bank = None):
	doc = {
		'name': name,
		'model': model,
		'duration': duration,
		'frame': MAX_FRAME,
		'topology': {'gnb_pe1': {'rate': '1 Gbps'}, 'pe1_p': {'rate': '100 Mbps'},
					'p_pe2': {'rate': '1 Gbps'}, 'pe2_upf': {'rate': '1 Gbps'}},
		'mapping': deepcopy(MAPPING),
		'policer': policer,
		'flows': flows,
		'schedule': deepcopy(schedule),
		'intervals': deepcopy(intervals),
	}
	if bank is not None:
		doc['banks'] = {'PE1': bank, 'P': deepcopy(bank)}
	return doc


"""
------------------------------------------------------------
Ingress policers
Updated 19/10/2026
------------------------------------------------------------
"""
def hctns_policer(leaf_burst = MAX_FRAME, slice_burst = MAX_FRAME, urllc_burst = MAX_FRAME,
				sharing = None):
	"""
	The three level tree. sharing = {class: (priority, quantum)}
	sets excess sharing on the leaves.
	"""
	def leaf(name):
		out = {'name': name, 'cir': CIR.get(name, 0), 'pir': PEAK}
		if name in CIR:
			out.update(cbs = leaf_burst, pbs = leaf_burst)
		if sharing and name in sharing:
			out.update(priority = sharing[name][0], quantum = sharing[name][1])
		return out

	urllc = {'name': 'URLLC', 'cir': SLICE_CIR['URLLC'], 'pir': PEAK,
			'cbs': urllc_burst, 'pbs': urllc_burst}
	if sharing and 'URLLC' in sharing:
		urllc.update(priority = sharing['URLLC'][0], quantum = sharing['URLLC'][1])
	return {
		'global': {'cir': PEAK},
		'slices': [
			urllc,
			{'name': 'ToD', 'cir': SLICE_CIR['ToD'], 'pir': PEAK, 'cbs': slice_burst,
			 'pbs': slice_burst, 'classes': [leaf('Video'), leaf('Telemetry')]},
			{'name': 'eMBB', 'cir': SLICE_CIR['eMBB'], 'pir': PEAK, 'cbs': slice_burst,
			 'pbs': slice_burst, 'classes': [leaf('VC'), leaf('BE')]},
		],
	}


def ietf_policer():
	"""ToD has no slice PIR, so no slice marker. BE has no class policer."""
	return {
		'slices': [
			{'name': 'URLLC', 'cir': SLICE_CIR['URLLC'], 'pir': PEAK},
			{'name': 'ToD', 'classes': [{'name': 'Video', 'cir': CIR['Video']},
										{'name': 'Telemetry', 'cir': CIR['Telemetry']}]},
			{'name': 'eMBB', 'cir': SLICE_CIR['eMBB'], 'pir': PEAK,
			 'classes': [{'name': 'VC', 'cir': CIR['VC']}, {'name': 'BE'}]},
		],
	}


def lin_policer(cbs = MARKER_BURST, committed_first = False):
	flows = {}
	for name, _, _ in FLOWS:
		if name in CIR:
			flows[name] = {'cir': CIR[name], 'pir': PEAK, 'cbs': cbs, 'pbs': MAX_FRAME,
							'committed_first': committed_first}
		else:
			flows[name] = None
	return {'flows': flows}


"""
------------------------------------------------------------
Experiments
	>>> A: every flow at 100 Mbps over six intervals, 100 s.
	>>> B: A's traffic with four PE1 quantum configurations.
	>>> C: low background rates plus 100 KB bursts, 60 s.
Updated 19/10/2026
------------------------------------------------------------
"""
def _exp_a_flows():
	return [{'name': n, 'slice': s, 'class': c, 'rate': PEAK} for n, s, c in FLOWS]


def exp_a(name, model, policer, bank = None):
	return _doc(name, model, policer, 100, _exp_a_flows(), EXP_A_SCHEDULE, EXP_A_INTERVALS, bank)


PRIO_SHARING = {
	'URLLC': (0, 18456),
	'Video': (0, 15380),
	'Telemetry': (0, 3076),
	'VC': (7, 12304),
	'BE': (7, 6152),
}

EXP_B_QUANTA = {
	'conf1': (1538, 1538, 15380),
	'conf2': (1538, 15380, 1538),
	'conf3': (15380, 1538, 1538),
	'conf4': (15380, 10766, 1538),
}

EXP_C_QUANTA = {
	'conf1': (1538, 1538, 1538),
	'conf2': (15380, 10766, 1538),
}

EXP_C_BACKGROUND = {'URLLC': '0.5 Mbps', 'Video': '10 Mbps', 'Telemetry': '1 Mbps',
					'VC': '10 Mbps', 'BE': '100 Mbps'}
EXP_C_BURSTS = {'URLLC': (1, 45), 'Video': (2, 60), 'Telemetry': (5, 60), 'VC': (5, 60)}
# burst frames leave the UEs at the gNB link rate, so bursts that coincide interleave
EXP_C_BURST_RATE = '1 Gbps'


def _exp_c_flows():
	flows = []
	for n, s, c in FLOWS:
		f = {'name': n, 'slice': s, 'class': c, 'rate': EXP_C_BACKGROUND[n]}
		if n in EXP_C_BURSTS:
			period, until = EXP_C_BURSTS[n]
			f['burst'] = {'size': '100 KB', 'period': period, 'first_at': 10, 'until': until,
						'rate': EXP_C_BURST_RATE}
		flows.append(f)
	return flows


def exp_c(name, model, policer, bank = None):
	schedule = {n: [[0, 60]] for n, _, _ in FLOWS}
	return _doc(name, model, policer, 60, _exp_c_flows(), schedule, EXP_C_INTERVALS, bank)


PRESETS = {
	'exp_a_hctns': lambda: exp_a('exp_a_hctns', 'hctns', hctns_policer()),
	'exp_a_ietf': lambda: exp_a('exp_a_ietf', 'ietf', ietf_policer()),
	'exp_a_lin': lambda: exp_a('exp_a_lin', 'lin', lin_policer()),
	'exp_a_hctns_prio': lambda: exp_a('exp_a_hctns_prio', 'hctns',
									hctns_policer(sharing = PRIO_SHARING)),
}
for _conf, _quanta in EXP_B_QUANTA.items():
	PRESETS['exp_b_{}_hctns'.format(_conf)] = \
		lambda c = _conf, q = _quanta: exp_a('exp_b_{}_hctns'.format(c), 'hctns',
											hctns_policer(), _bank(*q))
	PRESETS['exp_b_{}_ietf'.format(_conf)] = \
		lambda c = _conf, q = _quanta: exp_a('exp_b_{}_ietf'.format(c), 'ietf',
											ietf_policer(), _bank(*q))
for _conf, _quanta in EXP_C_QUANTA.items():
	PRESETS['exp_c_hctns_{}'.format(_conf)] = \
		lambda c = _conf, q = _quanta: exp_c('exp_c_hctns_{}'.format(c), 'hctns',
											hctns_policer(50000, MAX_FRAME, 50000), _bank(*q))
PRESETS['exp_c_lin'] = lambda: exp_c('exp_c_lin', 'lin', lin_policer(50000, committed_first = True))


def list_presets():
	return list(PRESETS)


def scale_doc(doc, factor):
	"""
	Compresses (factor < 1) or stretches a scenario in time: the
	duration, schedule spans, intervals and burst windows are
	multiplied by factor. Rates and burst periods stay.
	"""
	doc = deepcopy(doc)
	doc['duration'] = doc['duration'] * factor
	doc['schedule'] = {f: [[a * factor, b * factor] for a, b in spans]
						for f, spans in (doc.get('schedule') or {}).items()}
	doc['intervals'] = [[a * factor, b * factor] for a, b in doc.get('intervals') or []]
	for f in doc.get('flows') or []:
		burst = f.get('burst')
		if burst:
			burst['first_at'] = burst.get('first_at', 0) * factor
			if burst.get('until') is not None:
				burst['until'] = burst['until'] * factor
	return doc


def preset_dict(name, scale = 1.0, duration = None):
	try:
		doc = PRESETS[name]()
	except KeyError:
		raise ValidationError('Unknown preset {!r}. Run list-presets to see them all.'.format(name))
	if scale != 1.0:
		doc = scale_doc(doc, scale)
	if duration is not None:
		doc['duration'] = duration
	return doc


def preset(name, scale = 1.0, duration = None):
	"""The validated Scenario of a built-in preset."""
	return from_dict(preset_dict(name, scale, duration))
