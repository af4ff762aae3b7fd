import numpy as np
import pytest

from otdp.ingest import parse_csv


def csv_table(text, **kwargs):
    """Parse inline CSV text (convenience for fixtures)."""
    return parse_csv(text, **kwargs)


def gaussian_blobs(separation, n=200, d=2, seed=42, balance=0.5):
    """Two Gaussian classes with the second shifted along the first axis.

    Paired construction: one noise draw per seed, shifted by `separation`,
    so fixtures with different separations differ only in the shift.
    """
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=(n, d))
    n0 = int(round(n * balance))
    y = np.array([0] * n0 + [1] * (n - n0))
    X = noise.copy()
    X[y == 1, 0] += separation
    return X, y


@pytest.fixture
def labeled_csv(tmp_path):
    """Small mixed-type labelled file on disk."""
    rng = np.random.default_rng(11)
    lines = ["duration,rate,proto,label"]
    for i in range(120):
        malicious = i % 4 == 0
        duration = rng.normal(6.0 if malicious else 1.0, 0.6)
        rate = rng.normal(20.0 if malicious else 3.0, 1.5)
        proto = "tcp" if i % 2 else "udp"
        label = "DoS" if malicious else "Normal"
        lines.append(f"{duration:.4f},{rate:.4f},{proto},{label}")
    path = tmp_path / "flows.csv"
    path.write_text("\n".join(lines) + "\n")
    return path
