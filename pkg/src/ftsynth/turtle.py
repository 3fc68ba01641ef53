"""A Turtle subset reader and a deterministic writer.

Supported: ``@prefix`` directives, prefixed names, absolute ``<IRI>``s,
quoted string literals with an optional ``^^`` datatype, ``a`` for
``rdf:type``, predicate lists (``;``), object lists (``,``) and ``#``
comments.  Blank nodes, collections, language tags, numeric/boolean
shorthand and relative IRIs are rejected.
"""

from __future__ import annotations

import re
from typing import IO, Iterator, NamedTuple, Optional, Union

from .kg import RDF_TYPE, Graph, Iri, Literal, Term, Triple


class TurtleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class _Tok(NamedTuple):
    kind: str  # IRI, PNAME, STRING, PREFIX, PUNCT, A, DTYPE
    value: object
    line: int
    column: int


_PREFIX_RE = re.compile(r"[A-Za-z][A-Za-z0-9_\-.]*")
_LOCAL_CHARS = re.compile(r"[A-Za-z0-9_\-.:%\u00b7\u00c0-\uffff]*")
_SAFE_LOCAL = re.compile(r"(?:[A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)?\Z")
_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        raise TurtleSyntaxError(message, line or self.line, col or self.col)

    def _advance(self, n: int) -> str:
        chunk = self.text[self.pos : self.pos + n]
        for ch in chunk:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return chunk

    def _skip_ws(self) -> None:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self._advance(1)
            elif ch == "#":
                end = text.find("\n", self.pos)
                self._advance((len(text) if end < 0 else end) - self.pos)
            else:
                break

    def tokens(self) -> Iterator[_Tok]:
        text = self.text
        while True:
            self._skip_ws()
            if self.pos >= len(text):
                return
            line, col = self.line, self.col
            ch = text[self.pos]
            rest = text[self.pos :]
            if ch == "<":
                end = text.find(">", self.pos)
                if end < 0:
                    self.error("unterminated IRI")
                raw = text[self.pos + 1 : end]
                if any(c.isspace() for c in raw) or "<" in raw:
                    self.error("invalid character in IRI")
                self._advance(end + 1 - self.pos)
                yield _Tok("IRI", raw, line, col)
            elif ch in "\"'":
                yield _Tok("STRING", self._string(ch), line, col)
            elif rest.startswith("^^"):
                self._advance(2)
                yield _Tok("DTYPE", "^^", line, col)
            elif ch in ".;,":
                self._advance(1)
                yield _Tok("PUNCT", ch, line, col)
            elif ch == "@":
                m = re.match(r"@([A-Za-z][A-Za-z0-9\-]*)", rest)
                word = m.group(1) if m else ""
                if word == "prefix":
                    self._advance(len("@prefix"))
                    yield _Tok("PREFIX", "@prefix", line, col)
                elif word == "base":
                    self.error("@base is not supported")
                else:
                    self.error("language tags are not supported")
            elif rest.startswith("_:") or ch == "[":
                self.error("blank nodes are not supported")
            elif ch in "()":
                self.error("collections are not supported")
            elif ch.isdigit() or (ch in "+-" and len(rest) > 1 and rest[1].isdigit()):
                self.error("numeric literals are not supported")
            else:
                yield self._name(line, col)

    def _string(self, quote: str) -> str:
        text = self.text
        if text.startswith(quote * 3, self.pos):
            self.error("long (triple-quoted) strings are not supported")
        line, col = self.line, self.col
        self._advance(1)
        out = []
        while True:
            if self.pos >= len(text) or text[self.pos] == "\n":
                self.error("unterminated string literal", line, col)
            ch = text[self.pos]
            if ch == quote:
                self._advance(1)
                return "".join(out)
            if ch == "\\":
                nxt = text[self.pos + 1 : self.pos + 2]
                if nxt in _ESCAPES:
                    out.append(_ESCAPES[nxt])
                    self._advance(2)
                elif nxt in ("u", "U"):
                    width = 4 if nxt == "u" else 8
                    digits = text[self.pos + 2 : self.pos + 2 + width]
                    if len(digits) != width or not re.fullmatch(r"[0-9A-Fa-f]+", digits):
                        self.error("bad unicode escape")
                    out.append(chr(int(digits, 16)))
                    self._advance(2 + width)
                else:
                    self.error(f"unknown escape \\{nxt}")
            else:
                out.append(ch)
                self._advance(1)

    def _name(self, line: int, col: int) -> _Tok:
        text = self.text
        m = _PREFIX_RE.match(text, self.pos)
        prefix = m.group(0) if m else ""
        after = self.pos + len(prefix)
        if after < len(text) and text[after] == ":":
            # a prefix may not end with '.'
            if prefix.endswith("."):
                self.error("prefix may not end with '.'")
            lm = _LOCAL_CHARS.match(text, after + 1)
            local = lm.group(0)
            while local.endswith("."):
                local = local[:-1]
            if local.startswith((".", "-")):
                self.error(f"invalid local name {local!r}")
            self._advance(after + 1 + len(local) - self.pos)
            return _Tok("PNAME", (prefix, local), line, col)
        if prefix == "a":
            self._advance(1)
            return _Tok("A", "a", line, col)
        if prefix in ("true", "false"):
            self.error("boolean literals are not supported")
        if prefix.upper() in ("PREFIX", "BASE"):
            self.error("SPARQL-style directives are not supported")
        self.error(f"unexpected character {text[self.pos]!r}")


class _Parser:
    def __init__(self, text: str):
        self.lexer = _Lexer(text)
        self.toks = list(self.lexer.tokens())
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self.triples: set[Triple] = set()

    def error(self, message: str, tok: Optional[_Tok] = None):
        if tok is None:
            tok = self.peek()
        if tok is None:
            raise TurtleSyntaxError(message, self.lexer.line, self.lexer.col)
        raise TurtleSyntaxError(message, tok.line, tok.column)

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of document")
        self.i += 1
        return tok

    def expect_punct(self, ch: str) -> None:
        tok = self.take()
        if tok.kind != "PUNCT" or tok.value != ch:
            self.error(f"expected {ch!r}", tok)

    def parse(self) -> Graph:
        while self.peek() is not None:
            if self.peek().kind == "PREFIX":
                self.directive()
            else:
                self.statement()
        return Graph(self.triples, self.prefixes)

    def directive(self) -> None:
        self.take()
        tok = self.take()
        if tok.kind != "PNAME" or tok.value[1] != "":
            self.error("expected a prefix name such as 'ex:'", tok)
        iri_tok = self.take()
        if iri_tok.kind != "IRI":
            self.error("expected <namespace IRI>", iri_tok)
        self.prefixes[tok.value[0]] = self.absolute(iri_tok)
        self.expect_punct(".")

    def absolute(self, tok: _Tok) -> str:
        raw = tok.value
        if not re.match(r"[A-Za-z][A-Za-z0-9+\-.]*:", raw):
            self.error(f"relative IRI <{raw}> is not supported", tok)
        return raw

    def iri(self, tok: _Tok, position: str) -> Iri:
        if tok.kind == "IRI":
            return Iri(self.absolute(tok))
        if tok.kind == "PNAME":
            prefix, local = tok.value
            if prefix not in self.prefixes:
                self.error(f"undefined prefix {prefix + ':'!r}", tok)
            return Iri(self.prefixes[prefix] + local)
        if tok.kind == "STRING":
            self.error(f"literal not allowed in {position} position", tok)
        if tok.kind == "A" and position == "subject":
            self.error("'a' not allowed in subject position", tok)
        self.error(f"expected an IRI in {position} position", tok)

    def statement(self) -> None:
        subject = self.iri(self.take(), "subject")
        while True:
            verb = self.take()
            predicate = RDF_TYPE if verb.kind == "A" else self.iri(verb, "predicate")
            while True:
                self.triples.add(Triple(subject, predicate, self.object()))
                nxt = self.peek()
                if nxt is not None and nxt.kind == "PUNCT" and nxt.value == ",":
                    self.take()
                    continue
                break
            nxt = self.take()
            if nxt.kind == "PUNCT" and nxt.value == ";":
                # trailing ';' before '.' is legal
                while self.peek() is not None and self.peek().kind == "PUNCT" and self.peek().value == ";":
                    self.take()
                after = self.peek()
                if after is not None and after.kind == "PUNCT" and after.value == ".":
                    self.take()
                    return
                continue
            if nxt.kind == "PUNCT" and nxt.value == ".":
                return
            self.error("expected ',', ';' or '.'", nxt)

    def object(self) -> Term:
        tok = self.take()
        if tok.kind == "STRING":
            nxt = self.peek()
            if nxt is not None and nxt.kind == "DTYPE":
                self.take()
                return Literal(tok.value, self.iri(self.take(), "datatype"))
            return Literal(tok.value)
        return self.iri(tok, "object")


def parse_turtle(document: Union[bytes, str, IO]) -> Graph:
    """Parse a Turtle document (bytes, text or a readable stream)."""
    if hasattr(document, "read"):
        document = document.read()
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TurtleSyntaxError(f"document is not UTF-8: {exc.reason}", 1, 1) from None
    if document.startswith("\ufeff"):
        document = document[1:]
    return _Parser(document).parse()


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ch in "\u2028\u2029" or 0xD800 <= ord(ch) <= 0xDFFF:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


class _Compactor:
    def __init__(self, prefixes: dict[str, str]):
        # longest namespace first; ties broken by prefix name
        self.candidates = sorted(prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))

    def iri(self, iri: Iri) -> str:
        for prefix, ns in self.candidates:
            if iri.value.startswith(ns) and _SAFE_LOCAL.match(iri.value[len(ns) :]):
                return f"{prefix}:{iri.value[len(ns):]}"
        return f"<{iri.value}>"

    def term(self, term: Term) -> str:
        if isinstance(term, Iri):
            return self.iri(term)
        text = f'"{_escape(term.lexical)}"'
        if term.datatype is not None:
            text += "^^" + self.iri(term.datatype)
        return text


def serialize_turtle(g: Graph) -> bytes:
    """Write ``g`` as Turtle; equal graphs with equal prefixes give equal bytes."""
    prefixes = {p: ns for p, ns in g.prefixes.items() if _PREFIX_RE.fullmatch(p) or p == ""}
    compact = _Compactor(prefixes)
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in sorted(prefixes.items())]
    if lines and len(g):
        lines.append("")

    by_subject: dict[Iri, dict[Iri, list[Term]]] = {}
    for t in g:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)

    for subject, preds in by_subject.items():
        # rdf:type first, then the sorted predicate order from iteration
        ordered = sorted(preds.items(), key=lambda kv: kv[0] != RDF_TYPE)
        parts = []
        for predicate, objects in ordered:
            verb = "a" if predicate == RDF_TYPE else compact.iri(predicate)
            parts.append(f"{verb} " + ", ".join(compact.term(o) for o in objects))
        head = compact.iri(subject)
        if len(parts) == 1:
            lines.append(f"{head} {parts[0]} .")
        else:
            lines.append(f"{head} {parts[0]} ;")
            for part in parts[1:-1]:
                lines.append(f"    {part} ;")
            lines.append(f"    {parts[-1]} .")
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""
