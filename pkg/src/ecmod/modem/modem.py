"""Symbol mapping and minimum-distance detection.

Symbol ``t`` is the point with index ``i_t`` of bank row
``schedule.tuple_index[t]``, rotated counter-clockwise by
``schedule.angle[t]``. Detection undoes the rotation and picks the nearest
point of the same row; the lowest index wins a tie.
"""

import numpy as np

from ecmod.constellation.qam import qam_reference
from ecmod.errors import BankMismatch, ScheduleTooShort
from ecmod.modem.bits import bits_to_indices, indices_to_bits
from ecmod.modem.schedule import TransmissionSchedule
from ecmod.tuplegen.bank import TupleBank

DETECT_CHUNK = 1 << 16


def _check_schedule(schedule: TransmissionSchedule, count: int) -> None:
    if len(schedule) < count:
        raise ScheduleTooShort(
            f"schedule holds {len(schedule)} records for {count} symbols"
        )


def _bank_table(bank: TupleBank, schedule: TransmissionSchedule, count):
    table = bank.symbols
    if len(table) == 0:
        raise BankMismatch("bank holds no tuples")
    if table.shape[1] != bank.m:
        raise BankMismatch(
            f"bank tuples have {table.shape[1]} points, header says M="
            f"{bank.m}"
        )
    rows = schedule.tuple_index[:count]
    if len(rows) and int(rows.max()) >= len(table):
        raise BankMismatch(
            f"schedule refers to tuple {int(rows.max())} of a "
            f"{len(table)}-tuple bank"
        )
    return table


def map_symbols(indices, table, rows, angle) -> np.ndarray:
    """``table[rows, indices]`` rotated by ``angle``, as complex symbols."""
    indices = np.asarray(indices, dtype=np.int64)
    return table[rows, indices] * np.exp(1j * np.asarray(angle))


def detect_symbols(received, table, rows, angle) -> np.ndarray:
    """Nearest-point indices after de-rotation."""
    received = np.asarray(received, dtype=np.complex128).reshape(-1)
    derotated = received * np.exp(-1j * np.asarray(angle))
    indices = np.empty(len(received), dtype=np.int64)
    for lo in range(0, len(received), DETECT_CHUNK):
        hi = lo + DETECT_CHUNK
        candidates = table[rows[lo:hi]]
        dist = np.abs(derotated[lo:hi, None] - candidates) ** 2
        indices[lo:hi] = np.argmin(dist, axis=1)
    return indices


def ecm_modulate_indices(
    indices, bank: TupleBank, schedule: TransmissionSchedule
) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    count = len(indices)
    _check_schedule(schedule, count)
    table = _bank_table(bank, schedule, count)
    if count and (indices.min() < 0 or indices.max() >= bank.m):
        raise BankMismatch(f"symbol indices must lie in [0, {bank.m})")
    return map_symbols(
        indices,
        table,
        schedule.tuple_index[:count],
        schedule.angle[:count],
    )


def ecm_modulate(
    bits, bank: TupleBank, schedule: TransmissionSchedule, pad: bool = True
) -> np.ndarray:
    """Map a bit stream onto the scheduled bank tuples.

    Raises:
        ScheduleTooShort: Fewer schedule records than symbols.
        BankMismatch: The schedule or bits do not fit the bank.
        LengthNotDivisible: Unpadded bits do not split into symbols.
    """
    indices = bits_to_indices(bits, bank.m, pad=pad)
    return ecm_modulate_indices(indices, bank, schedule)


def ecm_detect(
    received, bank: TupleBank, schedule: TransmissionSchedule
) -> np.ndarray:
    received = np.asarray(received, dtype=np.complex128).reshape(-1)
    count = len(received)
    _check_schedule(schedule, count)
    table = _bank_table(bank, schedule, count)
    return detect_symbols(
        received,
        table,
        schedule.tuple_index[:count],
        schedule.angle[:count],
    )


def ecm_demodulate(
    received, bank: TupleBank, schedule: TransmissionSchedule
) -> np.ndarray:
    return indices_to_bits(ecm_detect(received, bank, schedule), bank.m)


def _qam_parts(m: int, schedule: TransmissionSchedule | None, count: int):
    table = qam_reference(m).symbols[None, :]
    rows = np.zeros(count, dtype=np.int64)
    if schedule is None:
        return table, rows, np.zeros(count)
    _check_schedule(schedule, count)
    return table, rows, schedule.angle[:count]


def qam_modulate_indices(
    indices, m: int, schedule: TransmissionSchedule | None = None
) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    table, rows, angle = _qam_parts(m, schedule, len(indices))
    return map_symbols(indices, table, rows, angle)


def qam_modulate(
    bits,
    m: int,
    schedule: TransmissionSchedule | None = None,
    pad: bool = True,
) -> np.ndarray:
    """Gray-mapped square QAM; the schedule only contributes angles."""
    return qam_modulate_indices(
        bits_to_indices(bits, m, pad=pad), m, schedule
    )


def qam_detect(
    received, m: int, schedule: TransmissionSchedule | None = None
) -> np.ndarray:
    received = np.asarray(received, dtype=np.complex128).reshape(-1)
    table, rows, angle = _qam_parts(m, schedule, len(received))
    return detect_symbols(received, table, rows, angle)


def qam_demodulate(
    received, m: int, schedule: TransmissionSchedule | None = None
) -> np.ndarray:
    return indices_to_bits(qam_detect(received, m, schedule), m)
