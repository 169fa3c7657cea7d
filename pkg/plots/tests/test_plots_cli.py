from dicke_plots.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main


def test_renders_from_cli(sweep_csv, tmp_path, capsys):
    out = tmp_path / "fig.png"
    code = main(["g2-vs-lambda", "--in", str(sweep_csv), "--out", str(out)])
    assert code == EXIT_OK
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_multi_input_heatmap(bias_csv, tmp_path):
    out = tmp_path / "bias.png"
    code = main(["bias-heatmap", "--in", str(bias_csv), "--in", str(bias_csv),
                 "--out", str(out)])
    assert code == EXIT_OK
    assert out.exists()


def test_usage_errors(tmp_path):
    assert main([]) == EXIT_USAGE
    assert main(["nope", "--in", "x.csv", "--out", "y.png"]) == EXIT_USAGE


def test_missing_file_reported(tmp_path, capsys):
    code = main(["g2-vs-lambda", "--in", str(tmp_path / "absent.csv"),
                 "--out", str(tmp_path / "y.png")])
    assert code == EXIT_USAGE
    assert "absent.csv" in capsys.readouterr().err


def test_missing_column_exit_code(tmp_path, write_csv, capsys):
    path = write_csv(tmp_path / "bad.csv", ["lambda", "value"], [[0.1, 2.0]])
    code = main(["g2-vs-lambda", "--in", str(path),
                 "--out", str(tmp_path / "y.png")])
    assert code == EXIT_DATA
    assert "g2" in capsys.readouterr().err
