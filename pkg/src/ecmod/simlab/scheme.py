import re

import attr
import numpy as np

from ecmod.constellation.qam import SUPPORTED_ORDERS
from ecmod.errors import BankMismatch, UnsupportedOrder
from ecmod.modem.modem import (
    ecm_detect,
    ecm_modulate_indices,
    qam_detect,
    qam_modulate_indices,
)
from ecmod.modem.schedule import TransmissionSchedule, make_schedule
from ecmod.tuplegen.bank import TupleBank

KINDS = ("qam", "ecm")
_NAME = re.compile(r"^(?P<m>\d+)?(?P<kind>qpsk|qam|ecm)(?P<dr>-dr)?$")


@attr.s(frozen=True, eq=False)
class Scheme:
    """A modulation scheme a simulation can drive.

    Args:
        str kind: ``"qam"`` or ``"ecm"``.
        int m: Constellation order; taken from the bank for ECM when None.
        bool dr: Rotate every symbol (block) by a key-derived angle.
        TupleBank bank: Tuple bank, required for ECM.
        bool round_robin: Cycle through the bank instead of drawing rows.
        int block_length: Symbols sharing one rotation angle.
    """

    kind: str = attr.ib()
    m: int | None = attr.ib(default=None)
    dr: bool = attr.ib(default=False)
    bank: TupleBank | None = attr.ib(default=None)
    round_robin: bool = attr.ib(default=False)
    block_length: int = attr.ib(default=1)

    @kind.validator
    def check_kind(self, attribute, value):
        if value not in KINDS:
            raise ValueError(
                f"Unknown scheme kind {value!r}.\nSelect one of the "
                f"following: {', '.join(KINDS)}"
            )

    def __attrs_post_init__(self):
        if self.kind == "qam" and self.m not in SUPPORTED_ORDERS:
            raise UnsupportedOrder(
                f"Unsupported QAM order {self.m}.\nSelect one of the "
                f"following: {', '.join(map(str, SUPPORTED_ORDERS))}"
            )
        if self.kind == "ecm" and self.bank is not None:
            if self.m is not None and self.m != self.bank.m:
                raise BankMismatch(
                    f"scheme asks for M={self.m}, bank holds M={self.bank.m}"
                )

    @classmethod
    def parse(
        cls,
        text: str,
        bank: TupleBank | None = None,
        round_robin: bool = False,
        block_length: int = 1,
    ) -> "Scheme":
        """Build a scheme from names like ``qpsk``, ``16qam-dr``, ``ecm``."""
        match = _NAME.match(text.strip().lower())
        if match is None:
            raise ValueError(
                f"Cannot parse scheme {text!r}.\nSelect one of the "
                "following: qpsk, <M>qam, ecm, <M>ecm, each with an "
                "optional -dr suffix"
            )
        kind = match["kind"]
        m = int(match["m"]) if match["m"] else None
        if kind == "qpsk":
            if m not in (None, 4):
                raise ValueError(f"QPSK has order 4, got {m}")
            kind, m = "qam", 4
        elif kind == "qam" and m is None:
            raise ValueError("QAM schemes need an order, e.g. 16qam")
        return cls(
            kind=kind,
            m=m,
            dr=match["dr"] is not None,
            bank=bank if kind == "ecm" else None,
            round_robin=round_robin,
            block_length=block_length,
        )

    @property
    def order(self) -> int:
        if self.m is not None:
            return self.m
        return self._require_bank().m

    @property
    def name(self) -> str:
        suffix = "-dr" if self.dr else ""
        if self.kind == "qam":
            base = "qpsk" if self.m == 4 else f"{self.m}qam"
        else:
            base = f"{self.order}ecm" if self.has_order else "ecm"
        return base + suffix

    @property
    def has_order(self) -> bool:
        return self.m is not None or self.bank is not None

    def _require_bank(self) -> TupleBank:
        if self.bank is None:
            raise ValueError(f"scheme {self.kind!r} needs a tuple bank")
        return self.bank

    def schedule(
        self, seed: bytes | None, count: int, start: int = 0
    ) -> TransmissionSchedule | None:
        if self.kind == "ecm":
            return make_schedule(
                seed,
                len(self._require_bank()),
                count,
                self.dr,
                start=start,
                round_robin=self.round_robin,
                block_length=self.block_length,
            )
        if not self.dr:
            return None
        return make_schedule(
            seed, 1, count, True, start=start, block_length=self.block_length
        )

    def modulate_indices(
        self, indices, schedule: TransmissionSchedule | None
    ) -> np.ndarray:
        if self.kind == "ecm":
            return ecm_modulate_indices(
                indices, self._require_bank(), schedule
            )
        return qam_modulate_indices(indices, self.m, schedule)

    def detect(
        self, received, schedule: TransmissionSchedule | None
    ) -> np.ndarray:
        if self.kind == "ecm":
            return ecm_detect(received, self._require_bank(), schedule)
        return qam_detect(received, self.m, schedule)
