"""Fingerprint bank files: one INI section per transmitter."""

import configparser
from importlib import resources

from .errors import ParseError
from .impairments import TransmitterFingerprint

_FIELDS = ("iq_gain", "iq_phase_deg", "dc_offset", "pa_a1", "pa_a3", "pa_a5",
           "cfo_hz", "phase_noise_std")
_COMPLEX_FIELDS = {"dc_offset", "pa_a1", "pa_a3", "pa_a5"}


def _parse_bank(parser: configparser.ConfigParser, source: str) -> list[TransmitterFingerprint]:
    try:
        num_tx = parser.getint("bank", "num_tx")
    except (configparser.Error, ValueError) as e:
        raise ParseError(f"{source}: missing or bad [bank] header ({e})") from e
    bank = []
    for tx in range(num_tx):
        section = f"tx{tx}"
        if not parser.has_section(section):
            raise ParseError(f"{source}: missing section [{section}]")
        kwargs = {}
        for name in _FIELDS:
            raw = parser.get(section, name, fallback=None)
            if raw is None:
                continue
            try:
                kwargs[name] = complex(raw) if name in _COMPLEX_FIELDS else float(raw)
            except ValueError as e:
                raise ParseError(f"{source}: [{section}] {name}={raw!r}: {e}") from e
        bank.append(TransmitterFingerprint(**kwargs))
    return bank


def load_bank(path) -> list[TransmitterFingerprint]:
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ParseError(f"cannot read fingerprint bank {path}")
    return _parse_bank(parser, str(path))


def save_bank(bank: list[TransmitterFingerprint], path) -> None:
    parser = configparser.ConfigParser()
    parser["bank"] = {"version": "1", "num_tx": str(len(bank))}
    for tx, fp in enumerate(bank):
        parser[f"tx{tx}"] = {
            name: repr(getattr(fp, name)).strip("()") for name in _FIELDS
        }
    with open(path, "w") as f:
        parser.write(f)


def default_bank() -> list[TransmitterFingerprint]:
    """The versioned four-transmitter bank shipped with the package."""
    parser = configparser.ConfigParser()
    text = resources.files("chanaug").joinpath("data/fingerprint_bank_v1.ini").read_text()
    parser.read_string(text)
    return _parse_bank(parser, "fingerprint_bank_v1.ini")
