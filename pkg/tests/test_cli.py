import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from cli import main
from regions import rect, region_contains, region_from_json, s5_region


def write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture
def corners(tmp_path):
    return write(tmp_path / "corners.csv", "x,y\n0,0\n1,0\n0,1\n1,1\n")


@pytest.fixture
def s5_json(tmp_path):
    return write(tmp_path / "s5.json", json.dumps(s5_region().to_json()))


def test_hull_of_rect_corners(tmp_path, corners, capsys):
    out = tmp_path / "hull.json"
    assert main(['hull', '--points', corners, '--theta', '0', '--out', str(out)]) == 0
    assert capsys.readouterr().out.strip() == "area 1"
    data = json.loads(out.read_text())
    assert data['area'] == 1.0


def test_hull_writes_an_svg(tmp_path, corners):
    svg = tmp_path / "hull.svg"
    assert main(['hull', '--points', corners, '--out', str(tmp_path / "h.json"), '--svg', str(svg)]) == 0
    assert ET.parse(svg).getroot().tag.endswith('svg')


def test_hull_of_an_empty_file(tmp_path):
    empty = write(tmp_path / "empty.csv", "")
    assert main(['hull', '--points', empty, '--out', str(tmp_path / "h.json")]) == 3


def test_hull_of_a_bad_file(tmp_path, capsys):
    bad = write(tmp_path / "bad.csv", "0,0\na,b\n")
    assert main(['hull', '--points', bad, '--out', str(tmp_path / "h.json")]) == 2
    assert "line 2" in capsys.readouterr().err


def test_header_must_be_x_y(tmp_path, capsys):
    bad = write(tmp_path / "bad.csv", "a,b\n0,0\n")
    assert main(['hull', '--points', bad, '--out', str(tmp_path / "h.json")]) == 2
    assert "line 1" in capsys.readouterr().err


def test_angle_grid_too_small(tmp_path, corners):
    assert main(['angle', '--points', corners, '--grid', '0', '--out', str(tmp_path / "a.json")]) == 2


def test_angle_of_rect_corners_is_quarter_pi(tmp_path, corners, capsys):
    out = tmp_path / "angle.json"
    assert main(['angle', '--points', corners, '--grid', '8', '--out', str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data['psi']) == 8
    assert data['psi'][0] == pytest.approx(1.0)
    assert data['argmin'] == pytest.approx(np.pi / 4)
    assert capsys.readouterr().out.startswith("argmin ")


def test_angle_refined(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    assert main(['sample', '--region', write(tmp_path / "s5.json", json.dumps(s5_region().to_json())),
                 '--n', '300', '--seed', '1', '--out', str(pts)]) == 0
    out = tmp_path / "angle.json"
    assert main(['angle', '--points', str(pts), '--grid', '16', '--refine', '--out', str(out)]) == 0
    assert json.loads(out.read_text())['refined'] is not None
    assert "refined" in capsys.readouterr().out


def test_sample_is_deterministic(tmp_path, s5_json):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert main(['sample', '--region', s5_json, '--n', '200', '--seed', '5', '--out', str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "x,y" and len(lines) == 201
    pts = np.array([[float(v) for v in line.split(',')] for line in lines[1:]])
    assert region_contains(region_from_json(json.loads(open(s5_json).read())), pts).all()


@pytest.mark.parametrize('text', ['{"type": "blob"}', '{"type": "rect", "min": [0, 0]', '[1, 2]'])
def test_sample_of_a_bad_region(tmp_path, text):
    region = write(tmp_path / "r.json", text)
    assert main(['sample', '--region', region, '--n', '10', '--out', str(tmp_path / "s.csv")]) == 2


def test_distance_between_point_files(tmp_path, corners, capsys):
    assert main(['distance', '--mode', 'hausdorff', '--a', f'csv:{corners}', '--b', f'csv:{corners}']) == 0
    assert capsys.readouterr().out.split() == ["0", "0"]

    a = write(tmp_path / "a.csv", "0,0\n")
    b = write(tmp_path / "b.csv", "3,4\n")
    assert main(['distance', '--mode', 'hausdorff', '--a', f'csv:{a}', '--b', f'csv:{b}']) == 0
    assert capsys.readouterr().out.split() == ["5", "0"]


def test_distance_in_measure_between_regions(tmp_path, capsys):
    a = write(tmp_path / "a.json", json.dumps(rect((0, 0), (1, 1)).to_json()))
    b = write(tmp_path / "b.json", json.dumps(rect((0.5, 0), (1.5, 1)).to_json()))
    assert main(['distance', '--mode', 'measure', '--a', f'region:{a}', '--b', f'region:{b}',
                 '--mc', '50000', '--seed', '3']) == 0
    value, error = map(float, capsys.readouterr().out.split())
    assert abs(value - 1.0) <= 4 * error


def test_distance_to_a_hull_file(tmp_path, corners, capsys):
    hull = tmp_path / "hull.json"
    assert main(['hull', '--points', corners, '--theta', '0', '--out', str(hull)]) == 0
    capsys.readouterr()
    square = write(tmp_path / "sq.json", json.dumps(rect((0, 0), (1, 1)).to_json()))
    assert main(['distance', '--mode', 'hausdorff', '--a', f'hull:{hull}', '--b', f'region:{square}',
                 '--h', '0.02']) == 0
    value, error = map(float, capsys.readouterr().out.split())
    assert value <= error


def test_distance_with_a_malformed_set(tmp_path, corners):
    assert main(['distance', '--mode', 'hausdorff', '--a', corners, '--b', f'csv:{corners}']) == 2
    empty = write(tmp_path / "empty.csv", "x,y\n")
    assert main(['distance', '--mode', 'hausdorff', '--a', f'csv:{empty}', '--b', f'csv:{corners}']) == 3


def test_unknown_experiment(tmp_path):
    assert main(['experiment', 's9', '--out', str(tmp_path / "r.csv")]) == 2


def experiment_args(out, threads, svg=None):
    args = ['experiment', 's5', '--n', '100,200', '--seeds', '1', '--mc', '2000', '--h', '0.02',
            '--threads', str(threads), '--out', str(out)]
    return args + ['--svg', str(svg)] if svg is not None else args


def test_experiment_reruns_are_byte_identical(tmp_path):
    first, second = tmp_path / "one" / "r.csv", tmp_path / "two" / "r.csv"
    assert main(experiment_args(first, 1, svg=tmp_path / "svg1")) == 0
    assert main(experiment_args(second, 1, svg=tmp_path / "svg2")) == 0
    assert first.read_bytes() == second.read_bytes()
    assert (tmp_path / "one" / "r_summary.csv").read_bytes() == (tmp_path / "two" / "r_summary.csv").read_bytes()
    for name in ("estimation_n100.svg", "hull_n200.svg"):
        assert (tmp_path / "svg1" / name).read_bytes() == (tmp_path / "svg2" / name).read_bytes()
        assert ET.parse(tmp_path / "svg1" / name).getroot().tag.endswith('svg')

    lines = first.read_text().splitlines()
    assert lines[0] == "n,seed,theta,dh_sample,dh_hull,dmu,ratio"
    assert [line.split(',')[:2] for line in lines[1:]] == [['100', '0'], ['200', '0']]
    summary = json.loads((tmp_path / "one" / "r_summary.json").read_text())
    assert {row['estimator'] for row in summary['summary']} == {'biconvex', 'alpha'}


def test_experiment_does_not_depend_on_threads(tmp_path):
    one, many = tmp_path / "t1.csv", tmp_path / "t8.csv"
    assert main(experiment_args(one, 1)) == 0
    assert main(experiment_args(many, 8)) == 0
    assert one.read_bytes() == many.read_bytes()
    assert (tmp_path / "t1_summary.csv").read_bytes() == (tmp_path / "t8_summary.csv").read_bytes()


def test_experiment_defaults_to_the_logs_path(tmp_path, monkeypatch):
    from util.config import c
    monkeypatch.setattr(c, 'LOGS_PATH', str(tmp_path / "logs"))
    args = experiment_args(tmp_path / "unused.csv", 1)
    assert main(args[:-2]) == 0
    assert (tmp_path / "logs" / "s5.csv").exists()
    assert (tmp_path / "logs" / "s5_summary.json").exists()
