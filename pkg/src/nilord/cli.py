"""``nilord`` command line.

Reports are ``KEY: value`` lines.  Exit status: 0 for success or a true
answer, 1 for a false answer, 2 for unusable input.  Orders and
commensurations produced by a command are printed as single-line blocks
(``ORDER: [order] ...``) that the parser reads back unchanged.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import comm as cm
from . import oracle
from .order import OrderScheme, coordinate_schemes, group_signature, perturb_biinvariant, scheme_family
from .registry import REGISTRY_NAMES
from .textio import InputError, Workspace, emit_comm, emit_order, parse_element, parse_element_list

DEFAULT_SEED = 0


class Reporter:
    def __init__(self, out):
        self.out = out

    def __call__(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key}: {value}", file=self.out)


def _vec(v) -> str:
    return ",".join(str(x) for x in v)


# -- loading -------------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _workspace(args) -> Workspace:
    ws = Workspace()
    for path in getattr(args, "file", None) or []:
        _load(ws, path)
    return ws


def _load(ws: Workspace, path: str, validate: bool = True) -> list:
    try:
        return ws.load(_read(path), validate=validate)
    except InputError as exc:
        if exc.line is not None:
            raise InputError(f"{path}: {exc}", None, None, exc.details) from None
        raise


def _pick(ws: Workspace, spec: str, kind: str, validate: bool = True):
    """``path`` or ``path#name``; the file must hold exactly one block of ``kind`` unless named.

    Each file is read into its own workspace that sees the ``--file`` groups,
    so the same file may be given twice.  Returns ``(group ref, object)``.
    """
    path, _, name = spec.partition("#")
    local = Workspace(groups=dict(ws.groups))
    added = [n for k, n in _load(local, path, validate) if k == kind]
    table = local.orders if kind == "order" else local.comms
    if name:
        if name not in table:
            raise InputError(f"{path} has no {kind} named {name!r}")
    elif len(added) != 1:
        raise InputError(f"{path} holds {len(added)} {kind} blocks; select one with {path}#name")
    else:
        name = added[0]
    return local.group_refs[name], table[name]


def _group_for(ws, args, fallback=None):
    if getattr(args, "group", None):
        return args.group, ws.group(args.group)
    if fallback is not None:
        return fallback
    raise InputError("--group is required")


def _order(ws, args, validate=True) -> tuple[str, OrderScheme]:
    return _pick(ws, args.order, "order", validate)


def _comm(ws, spec, args=None, validate=True):
    ref, a = _pick(ws, spec, "comm", validate)
    if args is not None and getattr(args, "group", None):
        G = ws.group(args.group)
        if group_signature(G) != group_signature(a.group):
            raise InputError(f"commensuration is over {ref}, not {args.group}")
    return ref, a


# -- group -----------------------------------------------------------------------------------


def cmd_group_list(args, ws, say):
    for name in REGISTRY_NAMES:
        say("REGISTRY", name)
    for name in ws.groups:
        say("GROUP", name)
    return 0


def cmd_group_show(args, ws, say):
    ref, G = _group_for(ws, args)
    say("NAME", G.name)
    say("GENERATORS", ",".join(G.generators))
    say("RANK", G.rank)
    say("CLASS", G.nilpotency_class)
    for (i, j), v in sorted(G.brackets.items()):
        say("BRACKET", f"[{G.generators[i]},{G.generators[j]}] = ({_vec(v)})")
    say("UPPER_CENTRAL_DIMS", ",".join(str(v.dim) for v in G.upper_central_series()))
    say("CENTER", ";".join(f"({_vec(b)})" for b in G.center.basis))
    say("ABELIANIZATION_RANK", G.abelianization_rank())
    problems = G.verify()
    for p in problems:
        say("PROBLEM", p)
    say("CONSISTENT", not problems)
    return 0 if not problems else 1


# -- order -----------------------------------------------------------------------------------


def cmd_order_validate(args, ws, say):
    _, s = _order(ws, args, validate=False)
    bad = s.validate()
    for v in bad:
        say("VIOLATION", v)
    say("VALID", not bad)
    return 0 if not bad else 1


def cmd_order_compare(args, ws, say):
    _, s = _order(ws, args)
    G = s.group
    c = s.compare(parse_element(G, args.lhs), parse_element(G, args.rhs))
    say("RESULT", {-1: "lhs<rhs", 0: "lhs=rhs", 1: "lhs>rhs"}[c])
    return 0


def cmd_order_jump(args, ws, say):
    _, s = _order(ws, args)
    g = parse_element(s.group, args.element)
    try:
        info = s.convex_jump(g)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    say("LEVEL", info.level)
    say("VALUE", info.value)
    say("SIGN", "+" if info.value > 0 else "-")
    say("CENTRAL", info.central)
    return 0


def cmd_order_reverse(args, ws, say):
    ref, s = _order(ws, args)
    try:
        r = s.reverse_on_jump(args.level)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    say("VALID", r.is_valid())
    say("ORDER", emit_order(r, ref, inline=True))
    return 0


def cmd_order_perturb(args, ws, say):
    ref, s = _order(ws, args)
    agree = parse_element_list(s.group, args.agree)
    try:
        new, witness = perturb_biinvariant(s, agree)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    checks = (new.is_valid() and bool(new.is_biinvariant())
              and all(new.sign(g) == s.sign(g) for g in agree)
              and new.sign(witness) != s.sign(witness))
    say("ORDER", emit_order(new, ref, inline=True))
    say("WITNESS", _vec(witness))
    say("VERIFIED", checks)
    if args.out:
        Path(args.out).write_text(emit_order(new, ref), encoding="utf-8")
        say("WROTE", args.out)
    return 0 if checks else 1


def cmd_order_check_bi(args, ws, say):
    _, s = _order(ws, args)
    res = s.is_biinvariant()
    n = s.rank
    for level in range(1, n + 1):
        say(f"LEVEL_{level}_CENTRAL", s.is_central_level(level))
    say("BIINVARIANT", res.ok)
    return 0 if res.ok else 1


# -- comm --------------------------------------------------------------------------------------


def cmd_comm_validate(args, ws, say):
    _, a = _pick(ws, args.comm[0], "comm", validate=False)
    try:
        cm.validate_comm(a.matrix, a.group)
    except cm.NotACommensuration as exc:
        say("VALID", False)
        say("REASON", exc)
        return 1
    say("VALID", True)
    say("AUTOMORPHISM", cm.is_automorphism(a))
    return 0


def cmd_comm_compose(args, ws, say):
    if len(args.comm) < 2:
        raise InputError("compose needs --comm at least twice")
    ref, out = _comm(ws, args.comm[0], args)
    for spec in args.comm[1:]:
        _, b = _comm(ws, spec, args)
        try:
            out = cm.compose(out, b)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    say("COMM", emit_comm(out, ref, inline=True))
    say("IDENTITY", out.is_identity)
    return 0


def cmd_comm_apply(args, ws, say):
    _, a = _comm(ws, args.comm[0], args)
    g = parse_element(a.group, args.element)
    img = cm.apply(a, g)
    say("IMAGE", _vec(img))
    say("IN_DOMAIN", img.is_integral())
    return 0


def cmd_comm_act(args, ws, say):
    _, a = _comm(ws, args.comm[0], args)
    ref, s = _order(ws, args)
    moved = cm.act_on_order(a, s)
    say("ORDER", emit_order(moved, ref, inline=True))
    say("MOVED", moved != s)
    return 0


def cmd_comm_witness(args, ws, say):
    ref, a = _comm(ws, args.comm[0], args)
    try:
        res = cm.faithfulness_witness(a, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if res == cm.FIXES_ALL:
        say("RESULT", cm.FIXES_ALL)
        return 1
    s, w = res
    moved = cm.act_on_order(a, s)
    say("RESULT", "moved")
    say("ORDER", emit_order(s, ref, inline=True))
    say("MOVED_ORDER", emit_order(moved, ref, inline=True))
    say("WITNESS", _vec(w))
    say("SIGN_BEFORE", s.sign(w))
    say("SIGN_AFTER", moved.sign(w))
    return 0


def cmd_comm_inner(args, ws, say):
    _, a = _comm(ws, args.comm[0], args)
    try:
        res = cm.is_inner(a)
    except (cm.NotAnAutomorphism, NotImplementedError) as exc:
        raise InputError(str(exc)) from None
    if res == cm.OUTER:
        say("INNER", False)
        say("RESULT", cm.OUTER)
        return 1
    say("INNER", True)
    say("CONJUGATOR", _vec(res))
    say("CONJUGATOR_WORD", a.group.format_element(res))
    return 0


def cmd_comm_bo_cert(args, ws, say):
    _, a = _comm(ws, args.comm[0], args)
    try:
        cert = cm.bo_trivial_certificate(a)
    except cm.NotAnAutomorphism as exc:
        raise InputError(str(exc)) from None
    say("CERTIFICATE", cert.ok)
    for r in cert.reasons:
        say("REASON", r)
    return 0 if cert.ok else 1


# -- oracle ------------------------------------------------------------------------------------


def _cap(args):
    return args.cap if args.cap is not None else oracle.default_cap()


def cmd_oracle_enumerate(args, ws, say):
    _, G = _group_for(ws, args)
    try:
        cones = oracle.enumerate_cones(G, args.radius, _cap(args))
    except oracle.CapExceeded as exc:
        raise InputError(str(exc)) from None
    say("BALL_SIZE", len(oracle.Ball.build(G, args.radius)))
    say("CONES", len(cones))
    bad = sum(1 for c in cones if c.violations())
    say("INVALID", bad)
    if args.list:
        for c in cones:
            say("CONE", c.format())
    return 0 if not bad else 1


def cmd_oracle_crosscheck(args, ws, say):
    _, G = _group_for(ws, args)
    if args.family == "coordinate":
        family = coordinate_schemes(G, reversals="all")
    else:
        family = scheme_family(G, args.count, seed=args.seed)
    try:
        rep = oracle.crosscheck(G, args.radius, family, _cap(args))
    except oracle.CapExceeded as exc:
        raise InputError(str(exc)) from None
    say("CONES", rep.cones)
    say("SCHEMES", rep.schemes)
    say("DISTINCT_RESTRICTIONS", rep.distinct_restrictions)
    say("UNMATCHED", len(rep.unmatched))
    say("UNREALIZED", rep.unrealized)
    say("INVALID", rep.invalid_cones)
    say("OK", rep.ok)
    return 0 if rep.ok else 1


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilord", description="Orders on nilpotent groups and commensurator actions.")
    p.add_argument("--file", action="append", help="load extra group definitions (repeatable)")
    top = p.add_subparsers(dest="area", required=True)

    def add(area, name, func, help_text):
        sp = area.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        return sp

    g = top.add_parser("group", help="inspect groups").add_subparsers(dest="cmd", required=True)
    add(g, "list", cmd_group_list, "list registry and loaded groups")
    sp = add(g, "show", cmd_group_show, "structure report")
    sp.add_argument("--group", required=True)

    o = top.add_parser("order", help="orders given by flags and functionals").add_subparsers(dest="cmd", required=True)
    for name, func, help_text in (("validate", cmd_order_validate, "check the flag conditions"),
                                  ("check-bi", cmd_order_check_bi, "bi-invariance test")):
        add(o, name, func, help_text).add_argument("--order", required=True)
    sp = add(o, "compare", cmd_order_compare, "compare two elements")
    sp.add_argument("--order", required=True)
    sp.add_argument("--lhs", required=True)
    sp.add_argument("--rhs", required=True)
    sp = add(o, "jump", cmd_order_jump, "convex jump of an element")
    sp.add_argument("--order", required=True)
    sp.add_argument("--element", required=True)
    sp = add(o, "reverse", cmd_order_reverse, "flip the order on one jump")
    sp.add_argument("--order", required=True)
    sp.add_argument("--level", type=int, required=True)
    sp = add(o, "perturb", cmd_order_perturb, "nearby distinct bi-invariant order")
    sp.add_argument("--order", required=True)
    sp.add_argument("--agree", required=True, help="elements to keep: words 'x,y' or vectors '1,0;0,1'")
    sp.add_argument("--out")

    c = top.add_parser("comm", help="commensurations").add_subparsers(dest="cmd", required=True)
    specs = {
        "validate": (cmd_comm_validate, "bracket and invertibility check", ()),
        "compose": (cmd_comm_compose, "product, first --comm applied first", ()),
        "apply": (cmd_comm_apply, "image of an element", ("element",)),
        "act": (cmd_comm_act, "action on an order", ("order",)),
        "witness": (cmd_comm_witness, "order moved by the commensuration", ()),
        "inner": (cmd_comm_inner, "conjugator or 'outer'", ()),
        "bo-cert": (cmd_comm_bo_cert, "certificate of trivial action on bi-invariant orders", ()),
    }
    for name, (func, help_text, extra) in specs.items():
        sp = add(c, name, func, help_text)
        sp.add_argument("--comm", action="append", required=True)
        sp.add_argument("--group")
        for e in extra:
            sp.add_argument(f"--{e}", required=True)
        if name == "witness":
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    r = top.add_parser("oracle", help="brute-force cones on word balls").add_subparsers(dest="cmd", required=True)
    sp = add(r, "enumerate", cmd_oracle_enumerate, "count partial cones")
    sp.add_argument("--list", action="store_true")
    sp2 = add(r, "crosscheck", cmd_oracle_crosscheck, "flag orders against the cone list")
    sp2.add_argument("--family", choices=("coordinate", "mixed"), default="mixed")
    sp2.add_argument("--count", type=int, default=20)
    sp2.add_argument("--seed", type=int, default=DEFAULT_SEED)
    for sp in (sp, sp2):
        sp.add_argument("--group", required=True)
        sp.add_argument("--radius", type=int, default=1)
        sp.add_argument("--cap", type=int, default=None, help="ball size limit (default: NILORD_CAP or 40)")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    say = Reporter(out)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        ws = _workspace(args)
        return args.func(args, ws, say)
    except InputError as exc:
        say("ERROR", exc)
        for d in exc.details:
            say("DETAIL", d)
        return 2


if __name__ == "__main__":
    sys.exit(main())
