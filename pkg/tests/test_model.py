import pytest
from tnslice.exceptions import DuplicateMapping, UnknownVlan, UnknownDscpNoDefault, UnknownPair, \
					ValidationError
from tnslice.model import MappingTable, Packet, TnQosClass, classify, map_to_tn_class, tn_class


def _pkt(vlan, dscp):
	return Packet(0, 'f', 1538, vlan, dscp, 0)


@pytest.mark.parametrize('vlan, dscp, expect', [
	('ToD', 38, ('ToD', 'Video')),
	('ToD', 28, ('ToD', 'Telemetry')),
	('URLLC', 46, ('URLLC', 'URLLC')),
	('eMBB', 28, ('eMBB', 'VC')),
	('eMBB', 0, ('eMBB', 'BE')),
	('eMBB', 12, ('eMBB', 'BE')),
])
def test_classify(table, vlan, dscp, expect):
	pkt = _pkt(vlan, dscp)
	assert classify(pkt, table) == expect
	assert pkt.slice is None


def test_map_to_tn_class(table):
	assert map_to_tn_class('ToD', 'Telemetry', table) is TnQosClass.C
	assert map_to_tn_class('eMBB', 'VC', table) is TnQosClass.C
	assert map_to_tn_class('URLLC', 'URLLC', table) is TnQosClass.A
	assert map_to_tn_class('eMBB', 'BE', table) is TnQosClass.D
	with pytest.raises(UnknownPair):
		map_to_tn_class('ToD', 'BE', table)


def test_classify_failures(table):
	with pytest.raises(UnknownVlan):
		classify(_pkt(999, 0), table)
	with pytest.raises(UnknownDscpNoDefault):
		classify(_pkt('ToD', 12), table)


def test_explicit_vlans():
	t = MappingTable([('S', 'a', None, 10, 'B')], vlans = {100: 'S'})
	assert classify(_pkt(100, 10), t) == ('S', 'a')
	assert t.vlan_of('S') == 100
	with pytest.raises(UnknownVlan):
		MappingTable([('S', 'a', None, 10, 'B')], vlans = {100: 'T'})


def test_duplicates_are_rejected():
	with pytest.raises(DuplicateMapping):
		MappingTable([('S', 'a', None, 10, 'B'), ('S', 'a', None, 12, 'C')])
	with pytest.raises(DuplicateMapping):
		MappingTable([('S', 'a', None, 10, 'B'), ('S', 'b', None, 10, 'C')])
	# the same DSCP in two slices is fine
	MappingTable([('S', 'a', None, 10, 'B'), ('T', 'a', None, 10, 'C')])


def test_default_must_be_mapped():
	with pytest.raises(UnknownPair):
		MappingTable([('S', 'a', None, 10, 'B')], defaults = {'S': 'z'})


def test_tn_class_and_packet_checks():
	assert tn_class('c') is TnQosClass.C
	assert tn_class(3) is TnQosClass.D
	with pytest.raises(ValueError):
		Packet(0, 'f', 0, 'S', 0, 0)


@pytest.mark.parametrize('dscp', [-1, 64, 255, '46', None])
def test_dscp_must_be_six_bits(dscp):
	with pytest.raises(ValidationError):
		MappingTable([('S', 'a', None, dscp, 'B')])


def test_dscp_range_edges():
	t = MappingTable([('S', 'a', None, 0, 'B'), ('S', 'b', None, 63, 'C')])
	assert classify(_pkt('S', 63), t) == ('S', 'b')
