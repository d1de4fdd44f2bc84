from collections import namedtuple
from ..base import MAX_FRAME, isDict, rate, size
from ..exceptions import ValidationError, UnknownPair
from ..model import Color, TnQosClass
from .markers import MARKER_FRAMES, TrTcmState, TwoColorState, trtcm_mark, two_color_mark

__all__ = ['IetfDisposition', 'LinDisposition', 'ietf_ingress', 'lin_ingress',
			'build_ietf', 'build_lin',
			'PASS', 'DEPRIORITIZED', 'DROP', 'HIGH', 'LOW']

PASS, DEPRIORITIZED, DROP = 'Pass', 'Deprioritized', 'Drop'
HIGH, LOW = 'HighQueue', 'LowQueue'

IetfDisposition = namedtuple('IetfDisposition', ['action', 'tn_class', 'color'])
LinDisposition = namedtuple('LinDisposition', ['action', 'color'])

_IETF_DROP = IetfDisposition(DROP, None, Color.Red)
_LIN_DROP = LinDisposition(DROP, Color.Red)


def ietf_ingress(slice_state, class_state, pkt, now):
	"""
	IETF 5QI-aware edge treatment.

	The class policer (single rate, two colors) runs first and drops
	what exceeds the class CIR. Best-effort classes have no class
	policer. The slice policer (trTCM) then passes green traffic with
	its own TN class, moves yellow traffic to class D and drops red.
	A slice without a peak rate has no slice policer at all.
	"""
	if class_state is not None and two_color_mark(class_state, pkt.size, now) is Color.Red:
		return _IETF_DROP
	if slice_state is None:
		return IetfDisposition(PASS, pkt.tn_class, Color.Green)

	color = trtcm_mark(slice_state, pkt.size, now)
	if color is Color.Green:
		return IetfDisposition(PASS, pkt.tn_class, Color.Green)
	if color is Color.Yellow:
		return IetfDisposition(DEPRIORITIZED, TnQosClass.D, Color.Yellow)
	return _IETF_DROP


def lin_ingress(state, pkt, now):
	"""
	One trTCM per flow feeding two priority queues: green goes high,
	yellow goes low, red is dropped. Flows without a marker (BE) always
	go low.
	"""
	if state is None:
		return LinDisposition(LOW, Color.Yellow)
	color = trtcm_mark(state, pkt.size, now)
	if color is Color.Green:
		return LinDisposition(HIGH, color)
	if color is Color.Yellow:
		return LinDisposition(LOW, color)
	return _LIN_DROP


"""
------------------------------------------------------------
Building
Updated 19/10/2026
------------------------------------------------------------
"""
def _marker_args(spec, where, frame):
	try:
		out = dict(cir = rate(spec.get('cir', 0)),
					cbs = size(spec['cbs']) if spec.get('cbs') is not None else MARKER_FRAMES * frame)
		if spec.get('pir') is not None:
			out['pir'] = rate(spec['pir'])
			out['pbs'] = size(spec['pbs']) if spec.get('pbs') is not None else MARKER_FRAMES * frame
	except ValueError as error:
		raise ValidationError('Marker {}: {}'.format(where, error))
	return out


def build_ietf(spec, table, frame = MAX_FRAME):
	"""
	spec = {'slices': [
		{'name': 'URLLC', 'cir': '1.2 Mbps', 'pir': '100 Mbps'},
		{'name': 'ToD', 'classes': [{'name': 'Video', 'cir': '32 Mbps'}, ...]},
		...]}
	A slice gets a trTCM only when it has a pir. A class gets a two
	color policer only when it has a cir. Returns (slices, classes)
	where classes holds every mapped (slice, class) pair.
	"""
	if not isDict(spec):
		raise ValidationError('The ietf policer section must be a mapping.')
	slices, classes = {}, {(e.slice, e.cls): None for e in table.entries}
	for s in spec.get('slices') or []:
		name = s.get('name') if isDict(s) else None
		if name not in table.dscp:
			raise ValidationError('The ietf policer configures unknown slice {!r}.'.format(name))
		args = _marker_args(s, name, frame)
		slices[name] = TrTcmState(args['cir'], args['pir'], args['cbs'], args['pbs']) \
						if 'pir' in args else None
		for c in s.get('classes') or []:
			key = (name, c.get('name') if isDict(c) else None)
			if key not in classes:
				raise UnknownPair(*key)
			if c.get('cir') is not None:
				args = _marker_args(c, '{}/{}'.format(*key), frame)
				classes[key] = TwoColorState(args['cir'], args['cbs'])
	return slices, classes


def build_lin(spec, flows, frame = MAX_FRAME):
	"""
	spec = {'flows': {'URLLC': {'cir': '1.2 Mbps', 'pir': '100 Mbps'},
					  'BE': None, ...}}
	Flows left out, or given None, are best effort.
	"""
	if not isDict(spec):
		raise ValidationError('The lin policer section must be a mapping.')
	given = spec.get('flows') or {}
	for name in given:
		if name not in flows:
			raise ValidationError('The lin policer configures unknown flow {!r}.'.format(name))

	out = {}
	for name in flows:
		f = given.get(name)
		if f is None:
			out[name] = None
			continue
		args = _marker_args(f, name, frame)
		out[name] = TrTcmState(args['cir'], args.get('pir', args['cir']), args['cbs'],
								args.get('pbs', MARKER_FRAMES * frame), bool(f.get('committed_first', False)))
	return out
