import filecmp
import os
import numpy as np
import pytest
from tnslice.base import MS
from tnslice.engine.simulator import Simulation, run, run_many, check_conservation
from tnslice.exceptions import UnknownPair, ValidationError
from tnslice.metrics import export, peak_latency
from tnslice.scenario import from_dict
from replay import scenario_doc, flows

PATH_FLOOR = 12304 + 123040 + 12304 + 12304	# serialization over the four hops
GNB_HOP = 12304


def test_empty_scenario_gives_zero_series(tmp_path):
	store = run(from_dict(scenario_doc('hctns', [], duration = 1)))
	assert store.throughput == {}
	assert store.generated == 0
	assert all(v == [0] for v in store.occupancy.values())
	assert check_conservation(store) == {}
	paths = export(store, 'csv', str(tmp_path))
	assert len(paths) == 4
	with open(os.path.join(str(tmp_path), 'small_hctns_throughput.csv')) as f:
		assert f.read() == 't_start,flow_or_queue,value\n'


@pytest.mark.parametrize('model', ['hctns', 'ietf', 'lin'])
def test_best_effort_alone_fills_the_bottleneck(model):
	store = run(from_dict(scenario_doc(model, flows('BE'), duration = 2)))
	assert 99.0 <= store.throughput['BE'][1] <= 100.1
	assert store.loss['PE1/D' if model != 'lin' else 'PE1/low'][-1] == 0
	assert check_conservation(store) == {}
	assert store.delivered_bytes == store.counters['UPF']['bytes']


@pytest.mark.parametrize('model', ['hctns', 'ietf', 'lin'])
def test_packets_are_conserved_under_congestion(model):
	doc = scenario_doc(model, flows('URLLC', 'Video', 'BE'), duration = 1)
	store = run(from_dict(doc))
	assert check_conservation(store) == {}
	assert store.generated == store.counters['gNB']['received']
	delivered = store.counters['UPF']['received']
	assert delivered == len(store)
	assert delivered < store.generated


def test_latency_respects_causality():
	store = run(from_dict(scenario_doc('hctns', flows('Video', 'BE'), duration = 1)))
	_, t, _, latency, transit, color = store.records()
	assert latency.min() >= PATH_FLOOR
	assert (t >= latency).all()
	assert (transit <= latency).all() and transit.min() >= PATH_FLOOR - GNB_HOP
	assert (color == -1).all()


def test_transit_leaves_out_the_policer_wait():
	doc = scenario_doc('hctns', flows('Video', 'BE'), duration = 1)
	store = run(from_dict(doc))
	_, _, _, latency, transit, _ = store.records()
	# BE waits in its policer queue, the transport network stays empty
	assert latency.max() > 50 * MS
	assert transit.max() < 5 * MS
	assert np.nanmax(store.transit['BE']) < 5
	assert peak_latency(store, ['BE'], transit = True) == pytest.approx(transit.max() / MS)


def test_runs_are_deterministic(tmp_path):
	doc = scenario_doc('hctns', flows('Video', 'Telemetry', 'BE'), duration = 1)
	a = export(run(from_dict(doc)), 'csv', str(tmp_path / 'a'))
	b = export(run(from_dict(doc)), 'csv', str(tmp_path / 'b'))
	for x, y in zip(a, b):
		assert filecmp.cmp(x, y, shallow = False)


def test_configuration_errors_surface_before_the_run():
	doc = scenario_doc('hctns', [{'name': 'x', 'slice': 'ToD', 'class': 'Nope', 'rate': 1}])
	with pytest.raises(UnknownPair):
		from_dict(doc)
	doc = scenario_doc('hctns', flows('BE'), banks = {'PE1': {'priority': ['A'], 'drr': {'B': 1538}}})
	with pytest.raises(ValidationError):
		from_dict(doc)


def test_policer_queues_are_reported():
	sim = Simulation(from_dict(scenario_doc('hctns', flows('Telemetry', 'BE'), duration = 1)))
	store = sim.run()
	assert 'PE1/htb/ToD/Telemetry' in store.occupancy
	assert 'PE1/htb/URLLC' in store.occupancy
	assert 'PE2/eMBB/BE' in store.occupancy
	# telemetry is offered 100 Mbps against at most 100 Mbps of tokens shared with BE
	assert store.occupancy['PE1/htb/ToD/Telemetry'][-1] > 0
	assert sim.tree.leaf(('ToD', 'Telemetry')).admitted > 0


def test_markers_count_their_drops():
	store = run(from_dict(scenario_doc('ietf', flows('Telemetry'), duration = 1)))
	drops = store.loss['PE1/marker/ToD/Telemetry'][-1]
	assert drops > 7000
	assert store.throughput['Telemetry'][0] == pytest.approx(4, abs = 0.1)


def test_run_many_keeps_order():
	docs = [scenario_doc('hctns', flows('BE', rate = '10 Mbps'), duration = 0.5, name = 'one'),
			scenario_doc('lin', flows('BE', rate = '20 Mbps'), duration = 0.5, name = 'two')]
	stores = run_many([from_dict(d) for d in docs], n_jobs = 2)
	assert [s.name for s in stores] == ['one', 'two']
	assert stores[1].delivered_bytes > stores[0].delivered_bytes
	assert np.isfinite(stores[0].latency['BE']).all()
