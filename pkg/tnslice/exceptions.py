

class TnSliceError(Exception):
	def __init__(self, text = 'Transport network slicing simulator error.'):
		self.text = text
	def __str__(self):
		return self.text


class ConfigurationError(TnSliceError):
	def __init__(self, text = 'The scenario is misconfigured.'):
		self.text = text


class ParseError(ConfigurationError):
	def __init__(self, text = 'The scenario document could not be parsed.',
				field = None, line = None):
		self.field, self.line = field, line
		where = []
		if line is not None: where.append('line {}'.format(line))
		if field is not None: where.append('field {}'.format(field))
		self.text = text if not where else '{} ({})'.format(text, ', '.join(where))


class ValidationError(ConfigurationError):
	def __init__(self, text = 'The scenario violates a configuration constraint.'):
		self.text = text


class CirSumExceeded(ValidationError):
	def __init__(self, node = None, total = None, limit = None):
		if node is None:
			self.text = 'The sum of the children CIRs exceeds the parent CIR.'
		else:
			self.text = ('CirSumExceeded: children of {} sum to {} bps, above'
						' its CIR of {} bps.'.format(node, total, limit))


class MissingGlobal(ValidationError):
	def __init__(self, text = 'MissingGlobal: the policer section needs a global'
								' policer with a CIR.'):
		self.text = text


class UnknownVlan(ValidationError):
	def __init__(self, vlan = None):
		self.text = 'UnknownVlan: VLAN {!r} does not map to any slice.'.format(vlan)


class UnknownDscpNoDefault(ValidationError):
	def __init__(self, slice = None, dscp = None):
		self.text = ('UnknownDscpNoDefault: DSCP {!r} is not mapped in slice {!r}'
					' and the slice has no default class.'.format(dscp, slice))


class UnknownPair(ValidationError):
	def __init__(self, slice = None, cls = None):
		self.text = 'UnknownPair: ({!r}, {!r}) has no TN QoS class.'.format(slice, cls)


class UnknownLeaf(ValidationError):
	def __init__(self, leaf = None):
		self.text = 'UnknownLeaf: {!r} is not a leaf of the policer tree.'.format(leaf)


class DuplicateMapping(ValidationError):
	def __init__(self, text = 'DuplicateMapping: a (slice, class) pair or a DSCP'
								' inside one slice is mapped twice.'):
		self.text = text


class FutureExceedsMemory(TnSliceError):
	def __init__(self, text = 'Recording every packet latency uses more memory'
								' than what is free. Run without raw latency.'):
		self.text = text


class ParallelReferenceError(TnSliceError):
	def __init__(self, text = 'At least 1 scenario is needed, as the list of'
								' scenarios is what the parallel runner maps over.'):
		self.text = text


class CompareFailure(TnSliceError):
	def __init__(self, text = 'Series deviate from the golden files beyond'
								' the tolerance.', deviations = None):
		self.text = text
		self.deviations = deviations or []
