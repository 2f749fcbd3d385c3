"""Rule-based parsing of ingredient lines and instruction sentences.

Ingredient lines follow the grammar `[quantity] [unit] [state]* name [, state]*`.
Instructions are matched against bundled verb/tool lexicons plus duration and
ingredient-mention patterns; anything unmatched falls through to the tip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from .corpus import Recipe, RecipeIngredient, Step, canonicalize_name

_UNICODE_FRACTIONS = {
    "¼": Fraction(1, 4), "½": Fraction(1, 2), "¾": Fraction(3, 4),
    "⅓": Fraction(1, 3), "⅔": Fraction(2, 3),
    "⅛": Fraction(1, 8), "⅜": Fraction(3, 8),
    "⅝": Fraction(5, 8), "⅞": Fraction(7, 8),
}


class Lexicon:
    """Alias -> canonical token map loaded from `canonical|alias...` lines."""

    def __init__(self, entries: dict[str, str]):
        self._map = entries

    @classmethod
    def from_file(cls, path) -> "Lexicon":
        entries: dict[str, str] = {}
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip().lower() for p in line.split("|")]
            canonical = parts[0]
            for alias in parts:
                entries[alias] = canonical
                # plural folding for free
                if not alias.endswith("s"):
                    entries[alias + "s"] = canonical
        return cls(entries)

    def lookup(self, token: str) -> Optional[str]:
        return self._map.get(token.lower())

    def __contains__(self, token: str) -> bool:
        return token.lower() in self._map

    def canonicals(self) -> set[str]:
        return set(self._map.values())


def _data_path(name: str):
    return resources.files("muse.data").joinpath(name)


@dataclass(frozen=True)
class LexiconSet:
    units: Lexicon
    verbs: Lexicon
    tools: Lexicon
    states: Lexicon

    @classmethod
    def bundled(cls) -> "LexiconSet":
        return cls(units=Lexicon.from_file(_data_path("units.txt")),
                   verbs=Lexicon.from_file(_data_path("verbs.txt")),
                   tools=Lexicon.from_file(_data_path("tools.txt")),
                   states=Lexicon.from_file(_data_path("states.txt")))


_DEFAULT_LEXICONS: Optional[LexiconSet] = None


def default_lexicons() -> LexiconSet:
    global _DEFAULT_LEXICONS
    if _DEFAULT_LEXICONS is None:
        _DEFAULT_LEXICONS = LexiconSet.bundled()
    return _DEFAULT_LEXICONS


@dataclass(frozen=True)
class ParsedIngredient:
    name: str
    quantity: Optional[Fraction] = None
    unit: Optional[str] = None
    state: Optional[str] = None

    def render(self) -> str:
        parts = []
        if self.quantity is not None:
            q = self.quantity
            if q.denominator == 1:
                parts.append(str(q.numerator))
            elif q > 1:
                whole, rem = divmod(q.numerator, q.denominator)
                parts.append(f"{whole} {rem}/{q.denominator}")
            else:
                parts.append(f"{q.numerator}/{q.denominator}")
        if self.unit:
            parts.append(self.unit)
        if self.state:
            parts.append(self.state)
        parts.append(self.name)
        return " ".join(parts)


@dataclass(frozen=True)
class StepCandidate:
    action: str
    tool: Optional[str] = None
    ingredient_mentions: tuple[str, ...] = ()
    duration: Optional[float] = None
    tip: Optional[str] = None


@dataclass(frozen=True)
class LineOutcome:
    line: int
    status: str  # parsed | partial | failed
    reason: Optional[str] = None


@dataclass
class ParseDiagnostics:
    ingredient_lines: list[LineOutcome] = field(default_factory=list)
    instruction_lines: list[LineOutcome] = field(default_factory=list)

    @property
    def partial_count(self) -> int:
        return sum(1 for o in self.ingredient_lines + self.instruction_lines
                   if o.status != "parsed")


def _take_quantity(tokens: list[str]) -> tuple[Optional[Fraction], list[str]]:
    if not tokens:
        return None, tokens
    qty: Optional[Fraction] = None
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        piece: Optional[Fraction] = None
        if tok in _UNICODE_FRACTIONS:
            piece = _UNICODE_FRACTIONS[tok]
        elif re.fullmatch(r"\d+/\d+", tok):
            piece = Fraction(tok)
        elif re.fullmatch(r"\d+(\.\d+)?", tok):
            piece = Fraction(tok).limit_denominator(10**6)
        elif qty is not None and tok.rstrip(".") in ("", "and"):
            i += 1
            continue
        if piece is None:
            break
        # "1 1/2" and "1½" style compounds accumulate
        qty = piece if qty is None else qty + piece
        i += 1
        if piece.denominator != 1:
            break
    return qty, tokens[i:]


def parse_ingredient_line(text: str, lexicons: Optional[LexiconSet] = None) -> ParsedIngredient:
    """Total parse of one ingredient line; never raises on weird input."""
    lex = lexicons or default_lexicons()
    raw = text.strip()
    if not raw:
        raise ValueError("empty ingredient line")

    # split off trailing ", state" clauses first
    head, *clauses = [p.strip() for p in raw.split(",")]
    states: list[str] = []
    leftovers: list[str] = []
    for clause in clauses:
        hit = lex.states.lookup(clause)
        if hit:
            states.append(hit)
        elif clause:
            leftovers.append(clause)

    # inline unicode fractions glued to a digit: "1½" -> "1 ½"
    head = re.sub(r"(\d)([" + "".join(_UNICODE_FRACTIONS) + "])", r"\1 \2", head)
    tokens = head.split()
    qty, tokens = _take_quantity(tokens)

    unit = None
    if tokens:
        hit = lex.units.lookup(tokens[0].rstrip("."))
        if hit and len(tokens) > 1:
            unit = hit
            tokens = tokens[1:]
        if tokens and tokens[0].lower() == "of":
            tokens = tokens[1:]

    name_tokens: list[str] = []
    for tok in tokens:
        hit = lex.states.lookup(tok)
        if hit and not name_tokens:
            states.insert(0, hit)
        else:
            name_tokens.append(tok)

    name = canonicalize_name(" ".join(name_tokens))
    if not name:
        # nothing left over after the grammar ate everything: fall back
        return ParsedIngredient(name=canonicalize_name(raw))
    if leftovers:
        name = name  # unmatched clauses are dropped, reported by caller diagnostics
    return ParsedIngredient(name=name, quantity=qty, unit=unit,
                            state=states[0] if states else None)


_DURATION_RE = re.compile(
    r"\bfor\s+(?:about\s+)?(\d+(?:\.\d+)?)\s*(minutes?|mins?|hours?|hrs?)\b",
    re.IGNORECASE,
)
_TOOL_RE = re.compile(r"\b(?:with|in|into|using|on)\s+(?:a|an|the)?\s*([a-z][a-z \-]*)",
                      re.IGNORECASE)


def parse_instruction(text: str, known_ingredients: list[str],
                      lexicons: Optional[LexiconSet] = None) -> StepCandidate:
    """Extract (action, tool, mentions, duration, tip) from one sentence."""
    lex = lexicons or default_lexicons()
    sentence = text.strip().rstrip(".")
    if not sentence:
        raise ValueError("empty instruction")

    lowered = sentence.lower()

    action = "unknown"
    for tok in re.findall(r"[a-z]+", lowered):
        hit = lex.verbs.lookup(tok)
        if hit:
            action = hit
            break

    tool = None
    for m in _TOOL_RE.finditer(lowered):
        for phrase_tok in m.group(1).split():
            hit = lex.tools.lookup(phrase_tok)
            if hit:
                tool = hit
                break
        if tool:
            break

    duration = None
    dm = _DURATION_RE.search(lowered)
    if dm:
        val = float(dm.group(1))
        if dm.group(2).lower().startswith(("hour", "hr")):
            val *= 60.0
        duration = val

    mentions = []
    for ing in known_ingredients:
        pattern = r"\b" + re.escape(ing.lower()).replace(r"\ ", r"\s+") + r"s?\b"
        if re.search(pattern, lowered):
            mentions.append(ing)

    tip = None
    if ";" in sentence:
        candidate = sentence.split(";")[-1].strip()
        if candidate and not any(lex.verbs.lookup(t) for t in re.findall(r"[a-z]+", candidate.lower())):
            tip = candidate

    return StepCandidate(action=action, tool=tool,
                         ingredient_mentions=tuple(mentions),
                         duration=duration, tip=tip)


@dataclass(frozen=True)
class RecipeDocument:
    title: str
    ingredient_lines: tuple[str, ...]
    instruction_lines: tuple[str, ...]
    dish_type: str = "other"
    cuisine: Optional[str] = None


def parse_recipe(document: RecipeDocument,
                 lexicons: Optional[LexiconSet] = None) -> tuple[Recipe, ParseDiagnostics]:
    """Compose the two parsers into a structured Recipe."""
    lex = lexicons or default_lexicons()
    if not document.ingredient_lines:
        raise ValueError(f"{document.title!r}: empty ingredient block")

    diags = ParseDiagnostics()
    parsed: list[ParsedIngredient] = []
    for n, line in enumerate(document.ingredient_lines):
        try:
            pi = parse_ingredient_line(line, lex)
        except ValueError:
            diags.ingredient_lines.append(LineOutcome(n, "failed", "empty line"))
            continue
        full = pi.quantity is not None or pi.unit is not None or pi.name != canonicalize_name(line)
        status = "parsed" if (full or pi.name == canonicalize_name(line.strip())) else "partial"
        if pi.quantity is None and pi.unit is None and pi.state is None and " " in line.strip():
            status = "partial"
        diags.ingredient_lines.append(LineOutcome(n, status))
        parsed.append(pi)

    seen: set[str] = set()
    ingredients: list[RecipeIngredient] = []
    for pi in parsed:
        if pi.name in seen:
            continue
        seen.add(pi.name)
        ingredients.append(RecipeIngredient(ingredient_id=pi.name, quantity=pi.quantity,
                                            unit=pi.unit, state=pi.state))
    if not ingredients:
        raise ValueError(f"{document.title!r}: no parseable ingredients")

    known = [ri.ingredient_id for ri in ingredients]
    steps: list[Step] = []
    # Steps form branches: a step naming only fresh ingredients starts a new
    # branch, a step naming consumed ingredients continues their branch, and a
    # step naming nothing merges every open branch (combine/bake/serve style).
    branch_of: dict[str, str] = {}   # ingredient -> head stage of its branch
    open_heads: list[str] = []
    for n, line in enumerate(document.instruction_lines):
        try:
            cand = parse_instruction(line, known, lex)
        except ValueError:
            diags.instruction_lines.append(LineOutcome(n, "failed", "empty line"))
            continue
        status = "parsed" if cand.action != "unknown" else "partial"
        diags.instruction_lines.append(LineOutcome(n, status))
        mentions = list(cand.ingredient_mentions)
        fresh = [m for m in mentions if m not in branch_of]
        heads = sorted({branch_of[m] for m in mentions if m in branch_of})
        if mentions:
            inputs = set(fresh) | set(heads)
        elif open_heads:
            inputs = set(open_heads)
        else:
            inputs = set(known)  # first step names nothing: whole mise en place
        output = f"stage{n + 1}"
        if mentions:
            for m in mentions:
                branch_of[m] = output
            open_heads = [h for h in open_heads if h not in heads] + [output]
        else:
            open_heads = [output]
            for m in branch_of:
                branch_of[m] = output
        steps.append(Step(action=cand.action, tool=cand.tool,
                          inputs=frozenset(inputs), output=output,
                          duration=cand.duration))

    recipe = Recipe(id=canonicalize_name(document.title).replace(" ", "_"),
                    title=document.title, dish_type=document.dish_type,
                    cuisine=document.cuisine, ingredients=tuple(ingredients),
                    steps=tuple(steps), provenance="corpus")
    return recipe, diags
