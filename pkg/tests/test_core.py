import json

import numpy as np
import pytest

from fragile import core


@pytest.fixture
def config():
    return core.Config(
        scenario="fig1_spectra",
        threads=0,
        model={"x": [[0, 2.0, 0.0], [1, 1.0, 0.0]], "gauge": "auto"},
        geometry={"L": 40, "kind": "interval"},
        lambda_fit={"margin": 0.02, "windows": []},
        svg=True,
    )


def test_dotted_access(config):
    assert config.geometry.L == 40
    assert config["geometry.kind"] == "interval"
    assert config.model.x == ((0, 2.0, 0.0), (1, 1.0, 0.0))
    assert "geometry.L" in config
    assert "geometry.R" not in config
    with pytest.raises(AttributeError):
        config.missing


def test_immutable(config):
    with pytest.raises(AttributeError):
        config.threads = 4
    with pytest.raises(AttributeError):
        config["threads"] = 4


def test_update_coerces(config):
    updated = config.update({"geometry.L": 60.0, "lambda_fit": {"margin": 1}})
    assert updated.geometry.L == 60 and isinstance(updated.geometry.L, int)
    assert updated.lambda_fit.margin == 1.0
    assert config.geometry.L == 40
    with pytest.raises(TypeError):
        config.update({"geometry.L": 2.5})
    with pytest.raises(TypeError):
        config.update(svg=1)
    with pytest.raises(KeyError):
        config.update({"geometry.Lz": 3})


def test_model_accepts_preset_name(config):
    assert config.update({"model.x": "two_step"}).model.x == "two_step"


def test_save_and_load(config, tmp_path):
    for suffix in (".yaml", ".json"):
        filename = tmp_path / f"config{suffix}"
        config.save(filename)
        assert core.Config.load(filename) == config
    assert json.loads((tmp_path / "config.json").read_text())["model"]["x"][1] == [1, 1.0, 0.0]


def test_flags(config):
    parsed = core.Flags(config).parse(["--geometry.L", "1e2", "--svg=False"])
    assert parsed.geometry.L == 100
    assert parsed.svg is False


def test_flag_lists():
    flags = core.Flags(sizes=[20, 30], name="a", nothing=None)
    parsed = flags.parse(["--sizes", "8,10,12", "--nothing", "0.5"])
    assert parsed.sizes == (8, 10, 12)
    assert parsed.nothing == 0.5
    assert flags.parse(["--sizes", "5", "7"]).sizes == (5, 7)


def test_flag_errors(config):
    with pytest.raises(ValueError):
        core.Flags(config).parse(["--geometry.Lz", "3"])
    with pytest.raises(ValueError):
        core.Flags(config).parse(["--geometry.L"])
    with pytest.raises(TypeError):
        core.Flags(config).parse(["--geometry.L", "abc"])
    with pytest.raises(TypeError):
        core.Flags(config).parse(["--model.x", "1,2"])


@pytest.mark.parametrize("strategy", ["blocking", "thread", "process"])
def test_pool_keeps_job_order(strategy):
    jobs = {("b", i): (i, 10 * i) for i in range(6)}
    with core.Pool(strategy, 2) as pool:
        found = pool.map(np.add, jobs)
    assert list(found) == list(jobs)
    assert [int(v) for v in found.values()] == [11 * i for i in range(6)]


def test_pool_rejects_unknown_strategy():
    with pytest.raises(KeyError):
        core.Pool("cluster", 2)


def test_jsonl_logger(tmp_path):
    output = core.logger.JSONLOutput(tmp_path, parallel=False)
    logger = core.Logger([output])
    logger.add({"rate": np.float32(0.5), "omega": 1 + 2j}, prefix="open")
    logger.step = 3
    logger.scalar("count", 7)
    logger.close()
    lines = [json.loads(x) for x in output.filename.read().splitlines()]
    assert lines == [
        {"step": 0, "open/rate": 0.5, "open/omega.re": 1.0, "open/omega.im": 2.0},
        {"step": 3, "count": 7.0},
    ]
    with pytest.raises(ValueError):
        logger.add({"vector": np.zeros(3)})


def test_timer():
    timer = core.Timer()
    for _ in range(3):
        with timer.scope("eig"):
            pass
    stats = timer.stats(reset=True)
    assert stats["eig_count"] == 3
    assert stats["eig_total"] >= 0
    assert timer.stats()["eig_count"] == 0


def test_path(tmp_path):
    root = core.Path(tmp_path) / "runs" / "fig1"
    root.mkdirs()
    filename = root / "spectra.csv"
    filename.write("re,im\n")
    assert filename.exists() and filename.isfile() and root.isdir()
    assert filename.name == "spectra.csv"
    assert filename.stem == "spectra"
    assert filename.suffix == ".csv"
    assert filename.parent == root
    assert list(root.glob("*.csv")) == [filename]
    assert filename.relative_to(root) == "spectra.csv"
    filename.remove()
    assert not filename.exists()
    assert str(core.Path("./a/b/")) == "a/b"


def test_format():
    assert core.format_({"a": np.zeros((2, 3))}) == "{a: f64[2,3]}"
    assert core.format_((1 + 2j,)) == "(1+2j)"
