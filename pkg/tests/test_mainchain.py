"""Main-chain detection, grid layout, flow routing, edge redirection."""

import json

from sfdgen.geometry import ChainLayoutParams
from sfdgen.mainchain import (detect_main_chains, layout_main_chain,
                              redirect_edges, route_flow)
from sfdgen.model import Kind, parse_model

PARAMS = ChainLayoutParams()
W = PARAMS.column_width


def axis_aligned(points) -> bool:
    return all(a[0] == b[0] or a[1] == b[1] for a, b in zip(points, points[1:]))


class TestDetection:
    def test_two_stocks_one_flow(self):
        m = parse_model(json.dumps({"variables": [
            {"name": "S1", "kind": "stock", "outflows": ["f"]},
            {"name": "f", "kind": "flow"},
            {"name": "S2", "kind": "stock", "inflows": ["f"]},
        ]}))
        chains = detect_main_chains(m)
        assert len(chains) == 1
        assert chains[0].members == {"S1", "S2", "f"}

    def test_population_with_unattached_flows(self, population_model):
        chains = detect_main_chains(parse_model(population_model))
        assert len(chains) == 1
        assert chains[0].members == {"Population", "births", "deaths"}

    def test_auxiliaries_only(self):
        m = parse_model("a b\n", format="edge-list")
        assert detect_main_chains(m) == []

    def test_partition_property(self, world2_source):
        m = parse_model(world2_source)
        chains = detect_main_chains(m)
        stocks = {v.name for v in m.stocks()}
        attached_flows = {f for f, _, _ in m.flow_links}
        union = set()
        total = 0
        for c in chains:
            union |= c.members
            total += len(c.members)
        assert union == stocks | attached_flows
        assert total == len(union)  # no element in two chains

    def test_flowless_stock_is_singleton_chain(self):
        m = parse_model('{"variables":[{"name":"S","kind":"stock"}]}')
        chains = detect_main_chains(m)
        assert len(chains) == 1
        assert chains[0].members == {"S"}


class TestChainLayout:
    def test_single_stock_in_out(self, population_model):
        chain = detect_main_chains(parse_model(population_model))[0]
        layout_main_chain(chain, PARAMS)
        assert chain.internal_pos["Population"] == (0.0, 0.0)
        births = chain.polylines["births"]
        deaths = chain.polylines["deaths"]
        assert len(births.points) == 2
        assert len(deaths.points) == 2
        assert births.points[0][1] == births.points[1][1]  # horizontal
        # inflow arrives from the left, outflow leaves to the right
        assert births.points[1][0] == -PARAMS.stock_width / 2.0
        assert deaths.points[0][0] == +PARAMS.stock_width / 2.0
        assert len(chain.clouds) == 2

    def test_linear_three_stock_chain(self, three_stock_chain):
        chain = detect_main_chains(parse_model(three_stock_chain))[0]
        layout_main_chain(chain, PARAMS)
        assert chain.internal_pos["S2"] == (0.0, 0.0)
        assert chain.internal_pos["S1"] == (-W, 0.0)
        assert chain.internal_pos["S3"] == (+W, 0.0)

    def test_two_upstream_stocks_centered(self):
        m = parse_model(json.dumps({"variables": [
            {"name": "C", "kind": "stock", "inflows": ["fa", "fb"]},
            {"name": "fa", "kind": "flow"},
            {"name": "fb", "kind": "flow"},
            {"name": "A", "kind": "stock", "outflows": ["fa"]},
            {"name": "B", "kind": "stock", "outflows": ["fb"]},
        ]}))
        chain = detect_main_chains(m)[0]
        layout_main_chain(chain, PARAMS)
        slot = PARAMS.stock_height + PARAMS.row_spacing
        ax, ay = chain.internal_pos["A"]
        bx, by = chain.internal_pos["B"]
        assert ax == bx == -W
        assert ay == -slot / 2.0 and by == +slot / 2.0  # centered on C

    def test_visited_stocks_never_move(self):
        # cycle S1 -> S2 -> S1: placement walk must not relocate S1
        m = parse_model(json.dumps({"variables": [
            {"name": "S1", "kind": "stock", "outflows": ["f12"], "inflows": ["f21"]},
            {"name": "S2", "kind": "stock", "outflows": ["f21"], "inflows": ["f12"]},
            {"name": "f12", "kind": "flow"},
            {"name": "f21", "kind": "flow"},
        ]}))
        chain = detect_main_chains(m)[0]
        layout_main_chain(chain, PARAMS)
        assert len(chain.internal_pos) >= 4
        assert chain.internal_pos["S1"] == (0.0, 0.0)
        for line in chain.polylines.values():
            assert axis_aligned(line.points)

    def test_all_segments_axis_aligned(self, world2_source):
        for chain in detect_main_chains(parse_model(world2_source)):
            layout_main_chain(chain, PARAMS)
            for line in chain.polylines.values():
                assert len(line.points) in (2, 4)
                assert axis_aligned(line.points)

    def test_bounding_box_covers_members(self, three_stock_chain):
        chain = detect_main_chains(parse_model(three_stock_chain))[0]
        layout_main_chain(chain, PARAMS)
        hw, hh = chain.half_extent
        for s in chain.stocks:
            x, y = chain.internal_pos[s]
            assert abs(x) + PARAMS.stock_width / 2.0 + PARAMS.margin <= hw + 1e-9
            assert abs(y) + PARAMS.stock_height / 2.0 + PARAMS.margin <= hh + 1e-9
        for line in chain.polylines.values():
            for x, y in line.points:
                assert abs(x) <= hw and abs(y) <= hh


class TestRouteFlow:
    def test_same_height_straight(self):
        line = route_flow("f", (0.0, 5.0), (100.0, 5.0))
        assert line.points == ((0.0, 5.0), (100.0, 5.0))

    def test_offset_s_pattern(self):
        line = route_flow("f", (0.0, 0.0), (120.0, 60.0))
        assert line.points == ((0.0, 0.0), (60.0, 0.0), (60.0, 60.0), (120.0, 60.0))
        assert axis_aligned(line.points)

    def test_parallel_flows_have_distinct_attachments(self):
        m = parse_model(json.dumps({"variables": [
            {"name": "A", "kind": "stock", "outflows": ["f1", "f2"]},
            {"name": "B", "kind": "stock", "inflows": ["f1", "f2"]},
            {"name": "f1", "kind": "flow"},
            {"name": "f2", "kind": "flow"},
        ]}))
        chain = detect_main_chains(m)[0]
        layout_main_chain(chain, PARAMS)
        f1, f2 = chain.polylines["f1"], chain.polylines["f2"]
        assert f1.points[0][1] != f2.points[0][1]
        assert f1.points[-1][1] != f2.points[-1][1]
        # symmetric offsets about the side center
        ys = sorted([f1.points[0][1], f2.points[0][1]])
        assert ys[0] == -ys[1]


class TestRedirectEdges:
    def test_aux_to_chain_member_remapped(self, population_model):
        m = parse_model(population_model)
        chains = detect_main_chains(m)
        lg = redirect_edges(m, chains)
        cid = chains[0].node_id
        assert ("crowding", cid) in lg.edges
        assert ("crowding", "deaths") in lg.edges[("crowding", cid)]

    def test_internal_edges_dropped(self, population_model):
        m = parse_model(population_model)
        lg = redirect_edges(m, detect_main_chains(m))
        cid = detect_main_chains(m)[0].node_id
        assert (cid, cid) not in lg.edges
        # Population -> births and Population -> deaths are internal
        assert lg.internal_dropped == 2

    def test_distinct_sources_preserved(self):
        m = parse_model(json.dumps({"variables": [
            {"name": "S", "kind": "stock", "inflows": ["f1"], "outflows": ["f2"]},
            {"name": "f1", "kind": "flow", "depends_on": ["a1"]},
            {"name": "f2", "kind": "flow", "depends_on": ["a2"]},
            {"name": "a1", "kind": "auxiliary"},
            {"name": "a2", "kind": "auxiliary"},
        ]}))
        lg = redirect_edges(m, detect_main_chains(m))
        cid = "chain:S"
        assert ("a1", cid) in lg.edges and ("a2", cid) in lg.edges

    def test_duplicate_collapse_remembers_all_originals(self):
        m = parse_model(json.dumps({"variables": [
            {"name": "S", "kind": "stock", "inflows": ["f1"], "outflows": ["f2"]},
            {"name": "f1", "kind": "flow", "depends_on": ["a"]},
            {"name": "f2", "kind": "flow", "depends_on": ["a"]},
            {"name": "a", "kind": "auxiliary"},
        ]}))
        lg = redirect_edges(m, detect_main_chains(m))
        originals = lg.edges[("a", "chain:S")]
        assert set(originals) == {("a", "f1"), ("a", "f2")}
        assert lg.duplicates_collapsed == 1

    def test_edge_conservation(self, world2_source):
        m = parse_model(world2_source)
        lg = redirect_edges(m, detect_main_chains(m))
        kept = sum(len(v) for v in lg.edges.values())
        assert kept + lg.internal_dropped == len(m.dep_edges)
        assert kept - lg.duplicates_collapsed == len(lg.edges)

    def test_node_set(self, population_model):
        m = parse_model(population_model)
        lg = redirect_edges(m, detect_main_chains(m))
        assert lg.node_ids == ["chain:Population", "crowding"]
        assert lg.node("crowding").kind is Kind.AUXILIARY
        assert lg.node("chain:Population").is_chain
