"""Tests for the command-line surface: flags, exit codes, reports."""

import json

from wpdenoise.cli import run
from wpdenoise.report import validate_report_dict
from wpdenoise.signal_io import read_wav


def _synth(tmp_path, name="in.wav", kind="mix", seed=3, extra=()):
    path = tmp_path / name
    status = run([
        "synth", "--kind", kind, "--out", str(path),
        "--seed", str(seed), "--duration", "1.0", *extra,
    ])
    assert status == 0
    return path


class TestSynth:
    def test_same_seed_same_bytes(self, tmp_path):
        a = _synth(tmp_path, "a.wav", kind="noise", seed=7)
        b = _synth(tmp_path, "b.wav", kind="noise", seed=7)
        assert a.read_bytes() == b.read_bytes()
        c = _synth(tmp_path, "c.wav", kind="noise", seed=8)
        assert a.read_bytes() != c.read_bytes()

    def test_sine_is_clean(self, tmp_path):
        path = _synth(tmp_path, "s.wav", kind="sine")
        sig = read_wav(path)
        assert sig.sample_rate_hz == 16000
        assert len(sig) == 16000

    def test_env_seed_overrides_flag(self, tmp_path, monkeypatch):
        flag = _synth(tmp_path, "flag.wav", kind="noise", seed=11)
        monkeypatch.setenv("WAVEDENOISE_SEED", "11")
        env = tmp_path / "env.wav"
        assert run(["synth", "--kind", "noise", "--out", str(env),
                    "--seed", "999", "--duration", "1.0"]) == 0
        assert flag.read_bytes() == env.read_bytes()

    def test_quiet_on_success(self, tmp_path, capsys):
        _synth(tmp_path, "q.wav", kind="noise")
        out = capsys.readouterr()
        assert out.out == "" and out.err == ""


class TestDenoise:
    def test_end_to_end_with_report(self, tmp_path, capsys):
        # material with a genuinely silent lead-in for noise estimation
        noisy = tmp_path / "noisy.wav"
        ref = tmp_path / "ref.wav"
        from wpdenoise.experiments import sine_0db_material
        from wpdenoise.signal_io import write_wav

        clean, mixed = sine_0db_material(seed=2)
        write_wav(noisy, mixed)
        write_wav(ref, clean)

        out = tmp_path / "out.wav"
        report_path = tmp_path / "report.json"
        status = run([
            "denoise", "--in", str(noisy), "--out", str(out),
            "--ref", str(ref), "--report", str(report_path),
            "--method", "universal-hard", "--seed", "2",
        ])
        assert status == 0
        captured = capsys.readouterr()
        assert captured.out == "" and captured.err == ""

        enhanced = read_wav(out)
        assert len(enhanced) == len(mixed)

        report = json.loads(report_path.read_text())
        validate_report_dict(report)
        assert report["mode"] == "denoise"
        assert report["output_snr_db"] > report["input_snr_db"]

    def test_snr_fields_absent_without_ref(self, tmp_path):
        noisy = _synth(tmp_path, "n.wav", kind="noise")
        out = tmp_path / "out.wav"
        report_path = tmp_path / "r.json"
        status = run([
            "denoise", "--in", str(noisy), "--out", str(out),
            "--report", str(report_path), "--silence-ms", "100",
        ])
        assert status == 0
        report = json.loads(report_path.read_text())
        validate_report_dict(report)
        assert "input_snr_db" not in report and "output_snr_db" not in report

    def test_missing_input_is_io_error(self, tmp_path, capsys):
        status = run([
            "denoise", "--in", str(tmp_path / "missing.wav"),
            "--out", str(tmp_path / "o.wav"),
        ])
        assert status == 2
        err = capsys.readouterr().err
        assert err.startswith("error:") and err.count("\n") == 1

    def test_malformed_wav_is_io_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.wav"
        bad.write_bytes(b"not a wav at all")
        status = run(["denoise", "--in", str(bad), "--out", str(tmp_path / "o.wav")])
        assert status == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_bad_geometry_is_processing_error(self, tmp_path, capsys):
        noisy = _synth(tmp_path)
        status = run([
            "denoise", "--in", str(noisy), "--out", str(tmp_path / "o.wav"),
            "--hop", "100",
        ])
        assert status == 3
        assert capsys.readouterr().err.startswith("error:")

    def test_unknown_method_is_usage_error(self, tmp_path, capsys):
        noisy = _synth(tmp_path)
        status = run([
            "denoise", "--in", str(noisy), "--out", str(tmp_path / "o.wav"),
            "--method", "sure",
        ])
        assert status == 1
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_subcommand_is_usage_error(self, capsys):
        assert run([]) == 1
        capsys.readouterr()


class TestAnalyze:
    def test_self_analysis_divergence_zero(self, tmp_path):
        wav = _synth(tmp_path, "x.wav", kind="noise")
        report_path = tmp_path / "r.json"
        status = run([
            "analyze", "--in", str(wav), "--noise", str(wav),
            "--report", str(report_path),
        ])
        assert status == 0
        report = json.loads(report_path.read_text())
        validate_report_dict(report)
        assert report["mode"] == "analyze"
        assert report["frames"] == []
        assert all(abs(d) <= 1e-9 for d in report["subband_divergence"])
        for entry in report["near_zero_ratios"]:
            assert abs(entry["ratio"] - 1.0) <= 1e-9
        assert len(report["histograms"]) == 16

    def test_distinct_noise_gives_positive_divergence(self, tmp_path):
        a = _synth(tmp_path, "a.wav", kind="mix", seed=5)
        b = _synth(tmp_path, "b.wav", kind="noise", seed=6)
        report_path = tmp_path / "r.json"
        assert run([
            "analyze", "--in", str(a), "--noise", str(b),
            "--report", str(report_path),
        ]) == 0
        report = json.loads(report_path.read_text())
        assert any(d > 0 for d in report["subband_divergence"])


class TestExperiment:
    def test_prints_snr_and_writes_valid_report(self, tmp_path, capsys):
        report_path = tmp_path / "r.json"
        status = run([
            "experiment", "--preset", "sine-0db", "--seed", "4",
            "--report", str(report_path),
        ])
        assert status == 0
        out_lines = capsys.readouterr().out.strip().splitlines()
        assert out_lines[0].startswith("input_snr_db ")
        assert out_lines[1].startswith("output_snr_db ")
        input_snr = float(out_lines[0].split()[1])
        output_snr = float(out_lines[1].split()[1])
        assert output_snr > input_snr

        report = json.loads(report_path.read_text())
        validate_report_dict(report)
        assert report["mode"] == "experiment"
        assert report["seed"] == 4

    def test_repeat_runs_byte_identical(self, tmp_path, capsys):
        paths = []
        for tag in ("1", "2"):
            wav = tmp_path / f"out{tag}.wav"
            rep = tmp_path / f"rep{tag}.json"
            assert run([
                "experiment", "--preset", "sine-0db", "--seed", "9",
                "--out", str(wav), "--report", str(rep),
            ]) == 0
            paths.append((wav, rep))
        capsys.readouterr()
        assert paths[0][0].read_bytes() == paths[1][0].read_bytes()
        assert paths[0][1].read_bytes() == paths[1][1].read_bytes()

    def test_unknown_preset_is_usage_error(self, capsys):
        assert run(["experiment", "--preset", "speech-5db"]) == 1
        capsys.readouterr()
