"""Transaction records, account labels and CSV ingestion.

Amounts are held as integer Wei (1 Ether = 10**18 Wei) so that sums over
many transfers stay exact.
"""

from __future__ import annotations

import csv
import enum
import io
import re
from dataclasses import dataclass
from decimal import Decimal
from os import PathLike
from types import MappingProxyType
from typing import BinaryIO, Iterable, Iterator, Mapping, TextIO, Union

WEI_PER_ETHER = 10**18

TX_HEADER = ("from", "to", "value", "timestamp")
LABEL_HEADER = ("address", "label")

_ETHER_RE = re.compile(r"^(\d+)(?:\.(\d{1,18}))?$")
_INT_RE = re.compile(r"^\d+$")

Source = Union[BinaryIO, bytes, str, "PathLike[str]"]


class EgonetError(Exception):
    """Base class for all errors raised by this package."""


class InputError(EgonetError, ValueError):
    """Malformed input file; ``line`` is the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}: "
        if line is not None:
            where += f"line {line}: "
        super().__init__(where + message)


class AccountLabel(str, enum.Enum):
    ICO = "ICO"
    MINING = "Mining"
    GAMBLING = "Gambling"
    EXCHANGE = "Exchange"
    PONZI = "Ponzi"
    PHISH = "Phish"
    UNKNOWN = "Unknown"

    @classmethod
    def parse(cls, text: str) -> "AccountLabel":
        """Case-sensitive parse; anything outside the enumeration is an error."""
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown label {text!r}") from None

    def __str__(self) -> str:
        return self.value


KNOWN_LABELS = tuple(label for label in AccountLabel if label is not AccountLabel.UNKNOWN)


def parse_ether(text: str) -> int:
    """Parse a non-negative decimal Ether string into Wei."""
    m = _ETHER_RE.match(text.strip())
    if m is None:
        if text.strip().startswith("-"):
            raise ValueError(f"negative amount {text!r}")
        raise ValueError(f"unparseable amount {text!r}")
    whole, frac = m.group(1), m.group(2) or ""
    return int(whole) * WEI_PER_ETHER + int(frac.ljust(18, "0") or 0)


def format_ether(wei: int) -> str:
    """Exact decimal rendering of a Wei amount, without trailing zeros."""
    sign = "-" if wei < 0 else ""
    whole, frac = divmod(abs(wei), WEI_PER_ETHER)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:018d}".rstrip("0")


def ether(value: str | int | Decimal) -> int:
    """Convenience: Ether amount (string, int or Decimal) to Wei."""
    if isinstance(value, Decimal):
        wei = value * WEI_PER_ETHER
        if wei != wei.to_integral_value():
            raise ValueError(f"{value} has more than 18 fractional digits")
        return int(wei)
    return parse_ether(str(value))


@dataclass(frozen=True)
class TransactionRecord:
    """One transfer of ``amount`` Wei from ``sender`` to ``receiver`` at ``timestamp``."""

    sender: str
    receiver: str
    amount: int
    timestamp: int

    def __post_init__(self):
        if not self.sender or not self.receiver:
            raise ValueError("sender and receiver must be non-empty")
        if self.amount < 0:
            raise ValueError(f"negative amount {self.amount}")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp {self.timestamp}")

    @property
    def ether(self) -> Decimal:
        return Decimal(self.amount) / WEI_PER_ETHER

    @property
    def is_self_transfer(self) -> bool:
        return self.sender == self.receiver


class TransactionSet:
    """Immutable, timestamp-ordered collection of transactions with an address index.

    Records with equal timestamps keep their input order.
    """

    __slots__ = ("_records", "_index")

    def __init__(self, records: Iterable[TransactionRecord] = ()):
        ordered = sorted(records, key=lambda r: r.timestamp)
        index: dict[str, list[int]] = {}
        for pos, rec in enumerate(ordered):
            index.setdefault(rec.sender, []).append(pos)
            if rec.receiver != rec.sender:
                index.setdefault(rec.receiver, []).append(pos)
        self._records = tuple(ordered)
        self._index = MappingProxyType({a: tuple(p) for a, p in index.items()})

    @property
    def records(self) -> tuple[TransactionRecord, ...]:
        return self._records

    @property
    def index(self) -> Mapping[str, tuple[int, ...]]:
        return self._index

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[TransactionRecord]:
        return iter(self._records)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransactionSet):
            return NotImplemented
        return self._records == other._records

    def __hash__(self) -> int:
        return hash(self._records)

    def __repr__(self) -> str:
        return f"TransactionSet(<{len(self)} records, {len(self._index)} addresses>)"

    def addresses(self) -> list[str]:
        return list(self._index)

    def involving(self, address: str) -> list[TransactionRecord]:
        """Records where ``address`` is sender or receiver, in timestamp order."""
        return [self._records[p] for p in self._index.get(address, ())]

    def without_zero_value(self) -> "TransactionSet":
        return TransactionSet(r for r in self._records if r.amount > 0)


def _open_text(source: Source) -> tuple[TextIO, str | None, bool]:
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"), newline=""), None, True
    if isinstance(source, (str, PathLike)):
        path = str(source)
        return open(path, encoding="utf-8", newline=""), path, True
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), getattr(source, "name", None), False


def _rows(source: Source, header: tuple[str, ...]) -> Iterator[tuple[int, list[str], str | None]]:
    try:
        stream, path, owned = _open_text(source)
    except UnicodeDecodeError as exc:
        raise InputError(f"invalid UTF-8: {exc}") from None
    try:
        reader = csv.reader(stream)
        try:
            first = next(reader, None)
        except UnicodeDecodeError as exc:
            raise InputError(f"invalid UTF-8: {exc}", path=path) from None
        if first is None:
            raise InputError("missing header row", line=1, path=path)
        if first and first[0].startswith("\ufeff"):
            first[0] = first[0][1:]
        if tuple(c.strip() for c in first) != header:
            raise InputError(f"expected header {','.join(header)!r}, got {','.join(first)!r}", line=1, path=path)
        while True:
            try:
                row = next(reader)
            except StopIteration:
                break
            except UnicodeDecodeError as exc:
                raise InputError(f"invalid UTF-8: {exc}", path=path) from None
            except csv.Error as exc:
                raise InputError(str(exc), line=reader.line_num, path=path) from None
            if not row:
                continue
            yield reader.line_num, row, path
    finally:
        if owned:
            stream.close()
        else:
            stream.detach()


def ingest_transactions(source: Source, keep_zero_value: bool = True) -> TransactionSet:
    """Parse a ``from,to,value,timestamp`` CSV into a :class:`TransactionSet`.

    ``source`` may be a binary stream, raw bytes, or a filesystem path.
    Raises :class:`InputError` naming the line of the first malformed row.
    """
    records = []
    for line, row, path in _rows(source, TX_HEADER):
        if len(row) != 4:
            raise InputError(f"expected 4 columns, got {len(row)}", line=line, path=path)
        sender, receiver, value, ts = (c.strip() for c in row)
        try:
            amount = parse_ether(value)
        except ValueError as exc:
            raise InputError(str(exc), line=line, path=path) from None
        if not _INT_RE.match(ts):
            raise InputError(f"unparseable timestamp {ts!r}", line=line, path=path)
        try:
            rec = TransactionRecord(sender, receiver, amount, int(ts))
        except ValueError as exc:
            raise InputError(str(exc), line=line, path=path) from None
        if keep_zero_value or amount > 0:
            records.append(rec)
    return TransactionSet(records)


def ingest_labels(source: Source) -> dict[str, AccountLabel]:
    """Parse an ``address,label`` CSV.

    Repeating an address with the same label is accepted; with a different
    label it is an error.
    """
    labels: dict[str, AccountLabel] = {}
    for line, row, path in _rows(source, LABEL_HEADER):
        if len(row) != 2:
            raise InputError(f"expected 2 columns, got {len(row)}", line=line, path=path)
        address, text = (c.strip() for c in row)
        if not address:
            raise InputError("empty address", line=line, path=path)
        try:
            label = AccountLabel.parse(text)
        except ValueError as exc:
            raise InputError(str(exc), line=line, path=path) from None
        prev = labels.get(address)
        if prev is not None and prev is not label:
            raise InputError(f"address {address} labelled both {prev} and {label}", line=line, path=path)
        labels[address] = label
    return labels


def write_transactions(txs: Iterable[TransactionRecord], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TX_HEADER)
    for r in txs:
        writer.writerow((r.sender, r.receiver, format_ether(r.amount), r.timestamp))


def write_labels(labels: Mapping[str, AccountLabel], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(LABEL_HEADER)
    for address, label in labels.items():
        writer.writerow((address, label.value))


def transactions_to_csv(txs: Iterable[TransactionRecord]) -> str:
    buf = io.StringIO()
    write_transactions(txs, buf)
    return buf.getvalue()
