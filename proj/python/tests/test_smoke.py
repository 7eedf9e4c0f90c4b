import os
import subprocess
import sys

import pytest

import procmine

TEMPLATE = """<testset xmlns="http://cpee.org/ns/properties/2.0">
  <endpoints><machine>https://x/y</machine></endpoints>
  <description><description xmlns="http://cpee.org/ns/description/1.0">
    <manipulate id="a1" label="Init"/>
    <parallel>
      <parallel_branch><call id="a2" endpoint="machine"><parameters><label>Fetch Data?</label></parameters></call></parallel_branch>
      <parallel_branch><manipulate id="a3" label="Check"/></parallel_branch>
    </parallel>
  </description></description>
</testset>"""

LOG = """---
log:
  trace:
    concept:name: '7'
    cpee:name: Demo
---
event:
  concept:name: Init
  id:id: a1
  lifecycle:transition: complete
  cpee:lifecycle:transition: activity/done
  time:timestamp: '2020-01-01T10:00:00.000+01:00'
---
event:
  concept:name: Fetch Data?
  concept:endpoint: https://x/y
  id:id: a2
  lifecycle:transition: start
  cpee:lifecycle:transition: activity/calling
  time:timestamp: '2020-01-01T10:00:01.000+01:00'
---
event:
  concept:name: Check
  id:id: a3
  lifecycle:transition: complete
  cpee:lifecycle:transition: activity/done
  time:timestamp: '2020-01-01T10:00:02.000+01:00'
"""


def test_clean_label():
    assert procmine.clean_label("Fetch Data?") == "FetchData"


def test_template_net():
    net = procmine.template_to_net(TEMPLATE)
    assert net.initial_marking[0] == 1
    assert "FetchData_a2_https://x/y_start" in net.transitions
    assert sorted(set(net.invisible)) == ["x_closing_parallel", "x_parallel", "x_parallel_branch"]
    assert len(net.final_markings) == 1
    text = net.to_tpn()
    assert text.startswith("place p0 init 1;\n")
    again = procmine.parse_tpn(text)
    assert again.to_tpn() == text
    assert again.transitions == net.transitions


def test_parse_error():
    with pytest.raises(procmine.Error):
        procmine.parse_tpn("place p0 init 1;\ntrans t\n  in p9;\n")


def test_simulated_traces_fit():
    net = procmine.template_to_net(TEMPLATE)
    for trace in procmine.simulate(TEMPLATE, seed=3, count=5):
        assert trace[0] == ("Init", "complete")
        assert len(trace) == 4


def test_yaml_to_xes_and_align():
    xes = procmine.yaml_to_xes([LOG])
    assert xes.count("<event>") == 3
    net = procmine.template_to_net(TEMPLATE)
    (result,) = procmine.align(net, xes)
    assert result["trace"] == "7"
    # the complete event of the call is missing
    assert result["cost"] == 1
    assert result["fitness"]["move_log"] == 1.0
    assert result["fitness"]["move_model"] == pytest.approx(0.75)

    table = procmine.fitness_table(xes, [("demo", net), ("again", net)])
    (row,) = table["rows"]
    assert row["assigned"] == 0
    assert not row["conflict"]
    assert table["csv"].startswith("group_id,multiplicity,demo_move_model")


def test_analytics():
    assert procmine.window_indices(20, "middle", 5) == [8, 9, 10, 11, 12]
    assert procmine.round_half_even(2.5) == 2.0
    train, test = procmine.split_train_test(41, 0.75, seed=1)
    assert (len(train), len(test)) == (31, 10)

    x = [[0.1 * i, float(i % 2) * 50.0] for i in range(20)]
    y = [i % 2 for i in range(20)]
    svm = procmine.train_svm(x, y, kernel="linear")
    assert svm.accuracy(x, y) == 1.0
    assert svm.info["gamma"] == 0.5
    nb = procmine.train_naive_bayes(x, y)
    assert nb.accuracy(x, y) == 1.0

    km = procmine.kmeans(x, 2, seed=4)
    assert procmine.cluster_accuracy(km["assignments"], y) == 1.0
    hc = procmine.hclust(x, 2)
    assert all(-1.0 <= w <= 1.0 for w in hc["silhouette"])
    assert procmine.cluster_accuracy([0, 0, 0, 1, 1], [1, 1, 0, 0, 0]) == pytest.approx(0.8)
    with pytest.raises(procmine.Error):
        procmine.train_svm(x, [1] * 20)


def test_measurement_stats():
    text = "Teil*MM1*MM2*MM3*A*B*C*D\n1*TRUE*TRUE*TRUE*TRUE*TRUE*TRUE*TRUE\n2*FALSE*TRUE*TRUE*TRUE*TRUE*TRUE*TRUE\n"
    st = procmine.measurement_stats(text)
    assert st["counts"]["MM1"] == (1, 1, 0)
    assert st["confusion"][1][1] == 1
    assert st["confusion"][1][0] == 1


def test_cli(tmp_path):
    (tmp_path / "t.xml").write_text(TEMPLATE)
    code, out, err = procmine.run_cli(["to-tpn", str(tmp_path / "t.xml"), str(tmp_path / "t.tpn")])
    assert code == 0, err
    assert (tmp_path / "t.tpn").read_text() == procmine.template_to_net(TEMPLATE).to_tpn()
    code, _, err = procmine.run_cli(["to-tpn", "--bogus"])
    assert code == 1
    assert "Usage" in err


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "procmine", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "conformance" in r.stdout


@pytest.mark.skipif(not os.environ.get("PROCMINE_CLI"), reason="command-line tool not built")
def test_executable_matches_module(tmp_path):
    (tmp_path / "t.xml").write_text(TEMPLATE)
    r = subprocess.run([os.environ["PROCMINE_CLI"], "to-tpn", str(tmp_path / "t.xml"), str(tmp_path / "a.tpn")])
    assert r.returncode == 0
    procmine.run_cli(["to-tpn", str(tmp_path / "t.xml"), str(tmp_path / "b.tpn")])
    assert (tmp_path / "a.tpn").read_bytes() == (tmp_path / "b.tpn").read_bytes()
