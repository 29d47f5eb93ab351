"""Grammar engine: context-free grammars with fact-bound terminal slots.

Grammar source format, one rule per line::

    # comment
    S -> NP VP "." | NP VP "," "police" "said" "." @2
    NP -> "a" {victim.sex} {victim.head}

Quoted strings are literal terminals, ``{object.attribute}`` is a slot
resolved from a fact table's bindings, a trailing ``@N`` weights an
alternative (default 1). The first rule's left-hand side is the start
symbol; repeated left-hand sides append alternatives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .facts import Conjunction, FactArg, FactTable, Lexeme, Phrase


class GrammarError(ValueError):
    """Grammar source or derivation problem."""


class GrammarSyntaxError(GrammarError):
    def __init__(self, line: int, column: int, message: str) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DanglingNonterminalError(GrammarError):
    def __init__(self, names: list[str]) -> None:
        super().__init__("undefined nonterminals: " + ", ".join(sorted(names)))
        self.names = tuple(sorted(names))


class UnboundSlotError(GrammarError):
    def __init__(self, refs: list[str]) -> None:
        super().__init__("unbound slot references: " + ", ".join(sorted(refs)))
        self.refs = tuple(sorted(refs))


class DepthExceededError(GrammarError):
    """Derivation hit the recursion depth limit before terminating."""


@dataclass(frozen=True)
class NonTerminal:
    name: str


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Slot:
    ref: str  # "object.attribute"


Symbol = NonTerminal | Literal | Slot


@dataclass(frozen=True)
class Alternative:
    symbols: tuple[Symbol, ...]
    weight: int = 1


@dataclass(frozen=True)
class Grammar:
    start: str
    productions: dict[str, tuple[Alternative, ...]]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def slot_references(self) -> set[str]:
        refs = set()
        for alts in self.productions.values():
            for alt in alts:
                for sym in alt.symbols:
                    if isinstance(sym, Slot):
                        refs.add(sym.ref)
        return refs


@dataclass(frozen=True)
class BoundGrammar:
    grammar: Grammar
    bindings: dict[str, str]  # slot ref -> surface text


# --- parsing -----------------------------------------------------------------

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CHARS = _IDENT_START | set("0123456789-")


def _scan_line(line: str, lineno: int) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        col = i + 1
        if ch in " \t":
            i += 1
        elif ch == "#":
            break
        elif line.startswith("->", i):
            tokens.append(("arrow", "->", col))
            i += 2
        elif ch == "|":
            tokens.append(("pipe", "|", col))
            i += 1
        elif ch == '"':
            end = line.find('"', i + 1)
            if end < 0:
                raise GrammarSyntaxError(lineno, col, "unterminated literal, expected closing '\"'")
            text = line[i + 1:end]
            if not text:
                raise GrammarSyntaxError(lineno, col, "empty literal")
            tokens.append(("literal", text, col))
            i = end + 1
        elif ch == "{":
            end = line.find("}", i + 1)
            if end < 0:
                raise GrammarSyntaxError(lineno, col, "unterminated slot, expected '}'")
            ref = line[i + 1:end].strip()
            if not ref or "." not in ref:
                raise GrammarSyntaxError(lineno, col, "slot must name object.attribute")
            tokens.append(("slot", ref, col))
            i = end + 1
        elif ch == "@":
            j = i + 1
            while j < n and line[j].isdigit():
                j += 1
            if j == i + 1:
                raise GrammarSyntaxError(lineno, col, "expected digits after '@'")
            tokens.append(("weight", line[i + 1:j], col))
            i = j
        elif ch in _IDENT_START:
            j = i
            while j < n and line[j] in _IDENT_CHARS:
                j += 1
            tokens.append(("ident", line[i:j], col))
            i = j
        else:
            raise GrammarSyntaxError(lineno, col, f"unexpected character {ch!r}")
    return tokens


def _parse_alternative(
    toks: list[tuple[str, str, int]], lineno: int
) -> Alternative:
    weight = 1
    if toks and toks[-1][0] == "weight":
        weight = int(toks[-1][1])
        if weight < 1:
            raise GrammarSyntaxError(lineno, toks[-1][2], "weight must be >= 1")
        toks = toks[:-1]
    symbols: list[Symbol] = []
    for kind, value, col in toks:
        if kind == "ident":
            symbols.append(NonTerminal(value))
        elif kind == "literal":
            symbols.append(Literal(value))
        elif kind == "slot":
            symbols.append(Slot(value))
        else:
            raise GrammarSyntaxError(lineno, col, f"unexpected {kind} in alternative")
    if not symbols:
        raise GrammarSyntaxError(lineno, toks[0][2] if toks else 1, "empty alternative")
    return Alternative(tuple(symbols), weight)


def parse_grammar(text: str) -> Grammar:
    """Parse grammar source, validating that every referenced nonterminal
    is defined and that the start symbol derives a finite sentence.

    Unreachable productions are collected as warnings on the grammar.
    """
    productions: dict[str, list[Alternative]] = {}
    start: str | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _scan_line(line, lineno)
        if not toks:
            continue
        if len(toks) < 2 or toks[0][0] != "ident" or toks[1][0] != "arrow":
            col = toks[0][2]
            raise GrammarSyntaxError(lineno, col, "rule must start with 'Name ->'")
        lhs = toks[0][1]
        if start is None:
            start = lhs
        alts: list[list[tuple[str, str, int]]] = [[]]
        for tok in toks[2:]:
            if tok[0] == "pipe":
                alts.append([])
            else:
                alts[-1].append(tok)
        for alt_toks in alts:
            productions.setdefault(lhs, []).append(_parse_alternative(alt_toks, lineno))
    if start is None:
        raise GrammarError("grammar has no rules")

    defined = set(productions)
    dangling = set()
    for alts2 in productions.values():
        for alt in alts2:
            for sym in alt.symbols:
                if isinstance(sym, NonTerminal) and sym.name not in defined:
                    dangling.add(sym.name)
    if dangling:
        raise DanglingNonterminalError(sorted(dangling))

    grammar = Grammar(start, {k: tuple(v) for k, v in productions.items()})
    productive = _productive_nonterminals(grammar)
    if start not in productive:
        raise GrammarError(f"start symbol {start!r} cannot derive a finite sentence")

    reachable = {start}
    frontier = [start]
    while frontier:
        name = frontier.pop()
        for alt in grammar.productions[name]:
            for sym in alt.symbols:
                if isinstance(sym, NonTerminal) and sym.name not in reachable:
                    reachable.add(sym.name)
                    frontier.append(sym.name)
    warnings = tuple(
        f"unreachable production: {name}" for name in sorted(defined - reachable)
    )
    return Grammar(grammar.start, grammar.productions, warnings)


def _productive_nonterminals(grammar: Grammar) -> set[str]:
    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for name, alts in grammar.productions.items():
            if name in productive:
                continue
            for alt in alts:
                if all(
                    not isinstance(s, NonTerminal) or s.name in productive
                    for s in alt.symbols
                ):
                    productive.add(name)
                    changed = True
                    break
    return productive


# --- binding and derivation ---------------------------------------------------


def render_arg(arg: FactArg) -> str:
    """Surface text of a slot value."""
    if isinstance(arg, Lexeme):
        return arg.surface
    if isinstance(arg, Phrase):
        return arg.surface
    if isinstance(arg, Conjunction):
        return " and ".join(render_arg(c) for c in arg.conjuncts)
    raise GrammarError(f"slot value {arg!r} has no surface form")


def bind_slots(grammar: Grammar, table: FactTable) -> BoundGrammar:
    """Resolve every slot reference in the grammar from the table's slot
    registry; reports all unresolved references at once."""
    bindings: dict[str, str] = {}
    missing: list[str] = []
    for ref in sorted(grammar.slot_references()):
        if ref in table.slots:
            bindings[ref] = render_arg(table.slots[ref])
        else:
            missing.append(ref)
    if missing:
        raise UnboundSlotError(missing)
    return BoundGrammar(grammar, bindings)


def derive(
    bound: BoundGrammar,
    rng: random.Random,
    max_depth: int = 100,
    start: str | None = None,
) -> list[str]:
    """Leftmost derivation of a token sequence.

    Alternatives are chosen with probability proportional to their weight;
    the result is fully determined by the rng state. Raises
    DepthExceededError when expansion nests deeper than max_depth.
    """
    grammar = bound.grammar
    symbol = start if start is not None else grammar.start
    if symbol not in grammar.productions:
        raise GrammarError(f"unknown start symbol {symbol!r}")

    tokens: list[str] = []

    def expand(name: str, depth: int) -> None:
        if depth > max_depth:
            raise DepthExceededError(
                f"derivation of {name!r} exceeded depth {max_depth}"
            )
        alts = grammar.productions[name]
        pick = rng.randrange(sum(a.weight for a in alts))
        chosen = alts[-1]
        for alt in alts:
            pick -= alt.weight
            if pick < 0:
                chosen = alt
                break
        for sym in chosen.symbols:
            if isinstance(sym, NonTerminal):
                expand(sym.name, depth + 1)
            elif isinstance(sym, Literal):
                tokens.extend(sym.text.split())
            else:
                tokens.extend(bound.bindings[sym.ref].split())

    expand(symbol, 1)
    return tokens
