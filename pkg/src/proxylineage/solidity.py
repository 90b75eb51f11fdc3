"""Lightweight Solidity lexing and function extraction.

This is deliberately not a grammar: the pairing and fingerprinting layers
only need comment/string-aware tokens, function signatures and body spans.
Modifiers, inheritance lists and assembly blocks pass through as opaque
tokens.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import SourceFile

CONTAINER_KEYWORDS = frozenset({"contract", "library", "interface"})
LOCATION_KEYWORDS = frozenset({"memory", "calldata", "storage"})
# Keywords that may trail a parameter's type tokens and are never its name.
_NON_NAME_KEYWORDS = frozenset(
    {
        "memory", "calldata", "storage", "payable", "indexed", "constant",
        "immutable", "internal", "external", "public", "private", "pure",
        "view", "virtual", "override", "returns", "function", "mapping",
    }
)

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")
_NUMBER_CONT = _DIGITS | frozenset("abcdefABCDEFxX._")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | punct
    text: str
    line: int
    pos: int


@dataclass(frozen=True)
class FunctionUnit:
    """One function declaration: identity plus its span in the file."""

    name: str
    signature: str
    body: str
    directory: str
    filename: str
    start_line: int
    end_line: int


def tokenize(text: str, diagnostics: list[str] | None = None) -> list[Token]:
    """Token stream with comments skipped and string literals blanked.

    String tokens always carry the text '""' so that literal contents never
    influence signatures or fingerprints.
    """
    tokens: list[Token] = []
    line = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            end = text.find("\n", i)
            i = n if end == -1 else end
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*/", i + 2)
            if end == -1:
                if diagnostics is not None:
                    diagnostics.append(f"line {line}: unterminated block comment")
                line += text.count("\n", i)
                i = n
                continue
            line += text.count("\n", i, end)
            i = end + 2
            continue
        if ch in ('"', "'"):
            start_line = line
            j = i + 1
            closed = False
            while j < n:
                cj = text[j]
                if cj == "\\" and j + 1 < n:
                    j += 2
                    continue
                if cj == ch:
                    closed = True
                    break
                if cj == "\n":
                    break
                j += 1
            if not closed and diagnostics is not None:
                diagnostics.append(f"line {start_line}: unterminated string literal")
            tokens.append(Token("string", '""', start_line, i))
            i = j + 1 if closed else j
            continue
        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            tokens.append(Token("ident", text[i:j], line, i))
            i = j
            continue
        if ch in _DIGITS:
            j = i + 1
            while j < n and text[j] in _NUMBER_CONT:
                j += 1
            tokens.append(Token("number", text[i:j], line, i))
            i = j
            continue
        tokens.append(Token("punct", ch, line, i))
        i += 1
    return tokens


def _split_top_level_commas(tokens: list[Token]) -> list[list[Token]]:
    groups: list[list[Token]] = [[]]
    depth = 0
    for token in tokens:
        if token.kind == "punct":
            if token.text in "([{":
                depth += 1
            elif token.text in ")]}":
                depth -= 1
            elif token.text == "," and depth == 0:
                groups.append([])
                continue
        groups[-1].append(token)
    return groups


def canonical_parameter(tokens: list[Token]) -> str:
    """Parameter type with the name and data location stripped, whitespace-free."""
    kept = [t for t in tokens if not (t.kind == "ident" and t.text in LOCATION_KEYWORDS)]
    if len(kept) >= 2:
        last = kept[-1]
        if last.kind == "ident" and last.text not in _NON_NAME_KEYWORDS:
            kept = kept[:-1]
    return "".join(t.text for t in kept)


def canonical_signature(name: str, param_tokens: list[Token]) -> str:
    groups = _split_top_level_commas(param_tokens)
    if len(groups) == 1 and not groups[0]:
        return f"{name}()"
    return f"{name}({','.join(canonical_parameter(g) for g in groups)})"


def extract_functions(
    file: SourceFile, diagnostics: list[str] | None = None
) -> list[FunctionUnit]:
    """Extract function declarations at the top level of contract-like bodies.

    A declaration's body spans the balanced ``{...}`` (kept verbatim) or is
    empty when the declaration ends at ``;``. Unbalanced braces at the end of
    the file produce a partial result plus a diagnostic instead of an error.
    """
    text = file.content
    tokens = tokenize(text, diagnostics)
    units: list[FunctionUnit] = []
    depth = 0
    container_depth: int | None = None
    pending_container = False
    i = 0
    n = len(tokens)
    while i < n:
        token = tokens[i]
        if token.kind == "punct":
            if token.text == "{":
                depth += 1
                if pending_container and container_depth is None:
                    container_depth = depth
                    pending_container = False
            elif token.text == "}":
                depth -= 1
                if container_depth is not None and depth < container_depth:
                    container_depth = None
            i += 1
            continue
        if token.kind == "ident" and token.text in CONTAINER_KEYWORDS and depth == 0:
            pending_container = True
            i += 1
            continue
        if (
            token.kind == "ident"
            and token.text == "function"
            and container_depth is not None
            and depth == container_depth
        ):
            unit, next_i = _parse_function(tokens, i, text, file, diagnostics)
            if unit is not None:
                units.append(unit)
                i = next_i
                continue
        i += 1
    if depth != 0 and diagnostics is not None:
        diagnostics.append(
            f"{file.directory}/{file.filename}: unbalanced braces at end of file"
            if file.directory
            else f"{file.filename}: unbalanced braces at end of file"
        )
    return units


def _parse_function(
    tokens: list[Token],
    start: int,
    text: str,
    file: SourceFile,
    diagnostics: list[str] | None,
) -> tuple[FunctionUnit | None, int]:
    n = len(tokens)
    # Declarations look like `function <name> ( ... )`; anything else here is
    # a function-typed variable or the old unnamed fallback, which we skip.
    if start + 2 >= n:
        return None, start + 1
    name_token = tokens[start + 1]
    open_paren = tokens[start + 2]
    if name_token.kind != "ident" or name_token.text in _NON_NAME_KEYWORDS:
        return None, start + 1
    if open_paren.kind != "punct" or open_paren.text != "(":
        return None, start + 1

    param_tokens: list[Token] = []
    paren_depth = 1
    j = start + 3
    while j < n and paren_depth:
        token = tokens[j]
        if token.kind == "punct":
            if token.text == "(":
                paren_depth += 1
            elif token.text == ")":
                paren_depth -= 1
                if paren_depth == 0:
                    j += 1
                    break
        param_tokens.append(token)
        j += 1
    if paren_depth:
        if diagnostics is not None:
            diagnostics.append(
                f"line {name_token.line}: unterminated parameter list for "
                f"function {name_token.text}"
            )
        return None, n

    signature = canonical_signature(name_token.text, param_tokens)
    start_line = tokens[start].line

    # Skip modifiers/returns clauses up to the body `{` or declaration-only `;`.
    paren_depth = 0
    while j < n:
        token = tokens[j]
        if token.kind == "punct":
            if token.text == "(":
                paren_depth += 1
            elif token.text == ")":
                paren_depth -= 1
            elif paren_depth == 0 and token.text == ";":
                return (
                    FunctionUnit(
                        name=name_token.text,
                        signature=signature,
                        body="",
                        directory=file.directory,
                        filename=file.filename,
                        start_line=start_line,
                        end_line=token.line,
                    ),
                    j + 1,
                )
            elif paren_depth == 0 and token.text == "{":
                brace_depth = 0
                k = j
                while k < n:
                    t = tokens[k]
                    if t.kind == "punct":
                        if t.text == "{":
                            brace_depth += 1
                        elif t.text == "}":
                            brace_depth -= 1
                            if brace_depth == 0:
                                body = text[token.pos:t.pos + 1]
                                return (
                                    FunctionUnit(
                                        name=name_token.text,
                                        signature=signature,
                                        body=body,
                                        directory=file.directory,
                                        filename=file.filename,
                                        start_line=start_line,
                                        end_line=t.line,
                                    ),
                                    k + 1,
                                )
                    k += 1
                if diagnostics is not None:
                    diagnostics.append(
                        f"line {start_line}: unbalanced braces at EOF in body of "
                        f"function {name_token.text}"
                    )
                return (
                    FunctionUnit(
                        name=name_token.text,
                        signature=signature,
                        body="",
                        directory=file.directory,
                        filename=file.filename,
                        start_line=start_line,
                        end_line=tokens[-1].line,
                    ),
                    n,
                )
        j += 1
    if diagnostics is not None:
        diagnostics.append(
            f"line {start_line}: function {name_token.text} has no body or terminator"
        )
    return (
        FunctionUnit(
            name=name_token.text,
            signature=signature,
            body="",
            directory=file.directory,
            filename=file.filename,
            start_line=start_line,
            end_line=tokens[-1].line,
        ),
        n,
    )
