from collections import namedtuple
from enum import IntEnum
from .exceptions import UnknownVlan, UnknownDscpNoDefault, UnknownPair, \
					DuplicateMapping, ValidationError

__all__ = ['TnQosClass', 'Color', 'Packet', 'QosMapEntry', 'MappingTable',
			'classify', 'map_to_tn_class', 'tn_class']


class TnQosClass(IntEnum):
	A = 0
	B = 1
	C = 2
	D = 3


class Color(IntEnum):
	Green = 0
	Yellow = 1
	Red = 2


def tn_class(X):
	"""
	Reads a TN QoS class from 'A'..'D', an int or a TnQosClass.
	"""
	if isinstance(X, TnQosClass):
		return X
	if isinstance(X, str):
		try:
			return TnQosClass[X.strip().upper()]
		except KeyError:
			raise ValidationError('Unknown TN QoS class {!r}. Use A, B, C or D.'.format(X))
	return TnQosClass(int(X))


class Packet:
	"""
	One frame travelling gNB -> PE1 -> P -> PE2 -> UPF.
	size is the on-wire frame size and is what both token buckets
	and links are charged with. slice and cls are filled in by the
	ingress classifier. admitted_at is when PE1 let the packet into the
	transport network.
	"""
	__slots__ = ['id', 'flow', 'size', 'vlan', 'dscp', 'tn_class', 'color',
				'created_at', 'admitted_at', 'delivered_at', 'slice', 'cls']

	def __init__(self, id, flow, size, vlan, dscp, created_at):
		if size <= 0:
			raise ValueError('Packet size must be positive, got {}'.format(size))
		self.id = id
		self.flow = flow
		self.size = size
		self.vlan = vlan
		self.dscp = dscp
		self.created_at = created_at
		self.admitted_at = None
		self.tn_class = None
		self.color = None
		self.delivered_at = None
		self.slice = None
		self.cls = None

	def __repr__(self):
		return 'Packet(id={}, flow={}, size={}, tn_class={}, t={})'.format(
			self.id, self.flow, self.size,
			None if self.tn_class is None else self.tn_class.name, self.created_at)


QosMapEntry = namedtuple('QosMapEntry', ['slice', 'cls', 'five_qi', 'dscp_in', 'tn_class'])


class MappingTable:
	"""
	The 5G to TN bridge of one scenario.
		vlans:		VLAN tag -> slice. Slices without an explicit tag are
					reachable by their own name as the tag.
		defaults:	slice -> class used for DSCPs not listed in that slice.

	Raises DuplicateMapping when a (slice, class) pair appears twice or
	a DSCP is used by two classes of one slice, and ValidationError for a
	DSCP outside 0..63.
	[Added 19/10/2026]
	"""
	def __init__(self, entries, vlans = None, defaults = None):
		self.entries = []
		for e in entries:
			e = QosMapEntry(*e)
			if not isinstance(e.dscp_in, int) or not 0 <= e.dscp_in <= 63:
				raise ValidationError('DSCP {!r} of ({!r}, {!r}) is not in 0..63.'.format(
					e.dscp_in, e.slice, e.cls))
			self.entries.append(e._replace(tn_class = tn_class(e.tn_class)))
		self.pairs = {}
		self.dscp = {}
		for e in self.entries:
			key = (e.slice, e.cls)
			if key in self.pairs:
				raise DuplicateMapping('DuplicateMapping: ({!r}, {!r}) is mapped twice.'.format(*key))
			self.pairs[key] = e

			inside = self.dscp.setdefault(e.slice, {})
			if e.dscp_in in inside:
				raise DuplicateMapping('DuplicateMapping: DSCP {} is used twice in slice {!r}.'
										.format(e.dscp_in, e.slice))
			inside[e.dscp_in] = e.cls

		self.slices = list(self.dscp)
		self.vlans = {s: s for s in self.slices}
		if vlans:
			for vlan, s in vlans.items():
				if s not in self.dscp:
					raise UnknownVlan(vlan)
				self.vlans[vlan] = s

		self.defaults = dict(defaults or {})
		for s, c in self.defaults.items():
			if (s, c) not in self.pairs:
				raise UnknownPair(s, c)


	def vlan_of(self, slice):
		for vlan, s in self.vlans.items():
			if s == slice and vlan != slice:
				return vlan
		return slice


	def entry(self, slice, cls):
		try:
			return self.pairs[(slice, cls)]
		except KeyError:
			raise UnknownPair(slice, cls)



def classify(packet, table):
	"""
	(slice, class) of a packet from its VLAN tag and DSCP. Pure: the
	packet is not touched.
	"""
	try:
		slice = table.vlans[packet.vlan]
	except KeyError:
		raise UnknownVlan(packet.vlan)

	cls = table.dscp[slice].get(packet.dscp)
	if cls is None:
		cls = table.defaults.get(slice)
		if cls is None:
			raise UnknownDscpNoDefault(slice, packet.dscp)
	return slice, cls


def map_to_tn_class(slice, cls, table):
	return table.entry(slice, cls).tn_class
