"""Stable text formats for posets, measures, systems, couplings and
certificates, plus the workspace that resolves names across files.

Rationals are serialized in lowest terms as ``p/q`` with ``/q`` omitted for
integers.  Every writer emits deterministically sorted lines; every emitted
block re-parses to an equal value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .coupling import Coupling, InfeasibilityCertificate, monotone_elements
from .measure import Measure, MeasureSystem
from .poset import OrderError, Poset


class ParseError(OrderError):
    pass


def format_fraction(v: Fraction) -> str:
    return str(Fraction(v))


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None


# -- poset -------------------------------------------------------------------


def format_poset(name: str, p: Poset) -> str:
    covers = " ".join(f"{x}<{y}" for x, y in p.covers())
    return (
        f"poset {name}\n"
        f"elements: {' '.join(p.elements)}\n"
        f"covers: {covers}\n"
    )


def format_measure(name: str, poset_name: str, m: Measure) -> str:
    lines = [f"measure {name} on {poset_name}"]
    for e, v in sorted(m.mass.items()):
        lines.append(f"{e} = {format_fraction(v)}")
    return "\n".join(lines) + "\n"


def format_system(
    name: str, index_name: str, target_name: str, assignment: dict[str, str]
) -> str:
    lines = [f"system {name} on index={index_name} target={target_name}"]
    for alpha, measure_name in sorted(assignment.items()):
        lines.append(f"{alpha} := {measure_name}")
    return "\n".join(lines) + "\n"


def format_coupling(index_name: str, target_name: str, c: Coupling) -> str:
    lines = [
        f"coupling on index={index_name} target={target_name}",
        f"order: {' '.join(c.domain.index.elements)}",
    ]
    for values, v in sorted(c.points()):
        lines.append(f"({' '.join(values)}) = {format_fraction(v)}")
    return "\n".join(lines) + "\n"


def format_certificate(index_name: str, target_name: str, cert: InfeasibilityCertificate) -> str:
    lines = [f"certificate on index={index_name} target={target_name}"]
    for alpha in cert.index.elements:
        for s, v in sorted(cert.functionals.get(alpha, {}).items()):
            if v:
                lines.append(f"f {alpha} {s} = {format_fraction(v)}")
    lines.append(f"lhs = {format_fraction(cert.lhs)}")
    lines.append(f"sup = {format_fraction(cert.sup)}")
    return "\n".join(lines) + "\n"


# -- parsing -----------------------------------------------------------------


def _clean_lines(text: str) -> list[list[str]]:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    return rows


@dataclass
class Workspace:
    """Named objects parsed from one or more files.

    Cross-references (measures naming posets, systems naming measures) are
    resolved only after every file has been read.
    """

    posets: dict[str, Poset] = field(default_factory=dict)
    measures: dict[str, Measure] = field(default_factory=dict)
    measure_homes: dict[str, str] = field(default_factory=dict)
    systems: dict[str, MeasureSystem] = field(default_factory=dict)
    system_names: list[str] = field(default_factory=list)
    couplings: dict[str, Coupling] = field(default_factory=dict)
    certificates: dict[str, InfeasibilityCertificate] = field(default_factory=dict)
    poset_order: list[str] = field(default_factory=list)

    def load(self, *texts: str) -> "Workspace":
        pending_measures = []
        pending_systems = []
        pending_couplings = []
        pending_certificates = []
        for text in texts:
            rows = _clean_lines(text)
            i = 0
            while i < len(rows):
                head = rows[i]
                if head[0] == "poset":
                    i = self._parse_poset(rows, i)
                elif head[0] == "measure":
                    i = self._collect_block(rows, i, pending_measures)
                elif head[0] == "system":
                    i = self._collect_block(rows, i, pending_systems)
                elif head[0] == "coupling":
                    i = self._collect_block(rows, i, pending_couplings)
                elif head[0] == "certificate":
                    i = self._collect_block(rows, i, pending_certificates)
                else:
                    raise ParseError(f"unexpected directive {head[0]!r}")
        for block in pending_measures:
            self._parse_measure(block)
        for block in pending_systems:
            self._parse_system(block)
        for block in pending_couplings:
            self._parse_coupling(block)
        for block in pending_certificates:
            self._parse_certificate(block)
        return self

    def _parse_poset(self, rows, i) -> int:
        head = rows[i]
        if len(head) != 2:
            raise ParseError("poset header needs exactly one name")
        name = head[1]
        if i + 2 >= len(rows) or rows[i + 1][0] != "elements:" or rows[i + 2][0] != "covers:":
            raise ParseError(f"poset {name!r} needs 'elements:' and 'covers:' lines")
        elements = rows[i + 1][1:]
        covers = []
        for tok in rows[i + 2][1:]:
            if "<" not in tok:
                raise ParseError(f"bad cover token {tok!r}")
            x, y = tok.split("<", 1)
            if not x or not y:
                raise ParseError(f"bad cover token {tok!r}")
            covers.append((x, y))
        self.posets[name] = Poset.from_covers(elements, covers)
        if name not in self.poset_order:
            self.poset_order.append(name)
        return i + 3

    @staticmethod
    def _collect_block(rows, i, sink) -> int:
        block = [rows[i]]
        i += 1
        heads = ("poset", "measure", "system", "coupling", "certificate")
        while i < len(rows) and rows[i][0] not in heads:
            block.append(rows[i])
            i += 1
        sink.append(block)
        return i

    def _parse_measure(self, block) -> None:
        head = block[0]
        if len(head) != 4 or head[2] != "on":
            raise ParseError("measure header: measure <name> on <poset>")
        name, poset_name = head[1], head[3]
        if poset_name not in self.posets:
            raise ParseError(f"measure {name!r} names unknown poset {poset_name!r}")
        base = self.posets[poset_name]
        mass = {}
        for row in block[1:]:
            if len(row) != 3 or row[1] != "=":
                raise ParseError(f"bad measure line {' '.join(row)!r}")
            mass[row[0]] = parse_fraction(row[2])
        self.measures[name] = Measure(base, mass)
        self.measure_homes[name] = poset_name

    def _parse_system(self, block) -> None:
        head = block[0]
        # "system [name] on index=A target=S"
        if "on" not in head:
            raise ParseError("system header needs 'on index=.. target=..'")
        at = head.index("on")
        name = head[1] if at == 2 else f"system{len(self.systems)}"
        opts = dict(tok.split("=", 1) for tok in head[at + 1 :] if "=" in tok)
        if set(opts) != {"index", "target"}:
            raise ParseError("system header needs index= and target=")
        if opts["index"] not in self.posets or opts["target"] not in self.posets:
            raise ParseError(f"system {name!r} names unknown posets")
        index, target = self.posets[opts["index"]], self.posets[opts["target"]]
        assignment = {}
        for row in block[1:]:
            if len(row) != 3 or row[1] != ":=":
                raise ParseError(f"bad system line {' '.join(row)!r}")
            alpha, mname = row[0], row[2]
            if mname not in self.measures:
                raise ParseError(f"system {name!r} names unknown measure {mname!r}")
            assignment[alpha] = self.measures[mname]
        self.systems[name] = MeasureSystem(index, target, assignment)
        self.system_names.append(name)

    def _resolve_pair(self, head, what: str):
        opts = dict(tok.split("=", 1) for tok in head[2:] if "=" in tok)
        if head[1] != "on" or set(opts) != {"index", "target"}:
            raise ParseError(f"{what} header: {what} on index=.. target=..")
        for role in ("index", "target"):
            if opts[role] not in self.posets:
                raise ParseError(f"{what} names unknown poset {opts[role]!r}")
        return self.posets[opts["index"]], self.posets[opts["target"]]

    def _parse_coupling(self, block) -> None:
        index, target = self._resolve_pair(block[0], "coupling")
        if len(block) < 2 or block[1][0] != "order:":
            raise ParseError("coupling needs an 'order:' line")
        order = tuple(block[1][1:])
        if order != index.elements:
            raise ParseError("coupling order must list the index elements sorted")
        delta = monotone_elements(index, target)
        mass = {}
        for row in block[2:]:
            if "=" not in row:
                raise ParseError(f"bad coupling line {' '.join(row)!r}")
            eq = row.index("=")
            values = tuple(tok.strip("()") for tok in row[:eq])
            try:
                mass[delta.position(values)] = parse_fraction(row[eq + 1])
            except KeyError:
                raise ParseError(f"coupling point {values} is not a monotone map") from None
        name = f"coupling{len(self.couplings)}"
        self.couplings[name] = Coupling(delta, mass)

    def _parse_certificate(self, block) -> None:
        index, target = self._resolve_pair(block[0], "certificate")
        functionals: dict[str, dict[str, Fraction]] = {}
        lhs = sup = None
        for row in block[1:]:
            if row[0] == "f" and len(row) == 5 and row[3] == "=":
                functionals.setdefault(row[1], {})[row[2]] = parse_fraction(row[4])
            elif row[0] == "lhs" and row[1] == "=":
                lhs = parse_fraction(row[2])
            elif row[0] == "sup" and row[1] == "=":
                sup = parse_fraction(row[2])
            else:
                raise ParseError(f"bad certificate line {' '.join(row)!r}")
        if lhs is None or sup is None:
            raise ParseError("certificate needs lhs and sup lines")
        name = f"certificate{len(self.certificates)}"
        self.certificates[name] = InfeasibilityCertificate(index, target, functionals, lhs, sup)

    def first_system(self) -> MeasureSystem:
        if not self.system_names:
            raise ParseError("no system block found")
        return self.systems[self.system_names[0]]

    def poset_named_or_first(self, name: Optional[str] = None) -> tuple[str, Poset]:
        if name is not None:
            if name not in self.posets:
                raise ParseError(f"unknown poset {name!r}")
            return name, self.posets[name]
        if not self.poset_order:
            raise ParseError("no poset block found")
        first = self.poset_order[0]
        return first, self.posets[first]

    def name_of_poset(self, p: Poset) -> str:
        for name in self.poset_order:
            if self.posets[name] == p:
                return name
        name = f"poset{len(self.posets)}"
        self.posets[name] = p
        self.poset_order.append(name)
        return name


def dump_system(ws_names: tuple[str, str], name: str, sys: MeasureSystem) -> str:
    """System block plus the poset and measure blocks it needs."""
    index_name, target_name = ws_names
    out = [format_poset(index_name, sys.index)]
    if sys.target != sys.index or target_name != index_name:
        out.append(format_poset(target_name, sys.target))
    assignment: dict[str, str] = {}
    for alpha in sys.index.elements:
        m = sys.assignment[alpha]
        # identical measures share one block
        found = next(
            (assignment[b] for b in assignment if sys.assignment[b] == m), None
        )
        if found is None:
            found = f"P_{alpha}"
            out.append(format_measure(found, target_name, m))
        assignment[alpha] = found
    out.append(format_system(name, index_name, target_name, assignment))
    return "\n".join(out)
