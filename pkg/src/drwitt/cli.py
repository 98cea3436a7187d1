"""Command-line front end.

Every command prints one JSON document (or text with ``--pretty``) that
echoes the context ``(p, r, depth, m)``.  Exit status: 0 on success, 1 when
a well-formed request is mathematically rejected, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cartier, conductor, filtration, harness
from .errors import DrwError
from .forms import DrwForm, form_from_json, from_witt, to_witt
from .laurent import TowerSpec
from .parser import Context, elaborate, parse_coords, parse_expr, print_expr
from .sampling import GridPoint
from .witt import WittVec, gen_witt_polys

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2

CONFIG_KEYS = {"p": int, "r": int, "depth": int, "m": int, "seed": str, "samples": int,
               "max_exp": int, "workers": int}


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for num, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{num}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{num}: unknown key {key!r}")
            try:
                out[key] = CONFIG_KEYS[key](value)
            except ValueError:
                raise UsageError(f"{path}:{num}: bad value for {key}") from None
    return out


def _common(sub):
    sub.add_argument("-p", "--prime", type=int, dest="p")
    sub.add_argument("-r", "--power", type=int, dest="r")
    sub.add_argument("--depth", type=int)
    sub.add_argument("-m", "--length", type=int, dest="m")
    sub.add_argument("--config")
    sub.add_argument("--pretty", action="store_true")
    sub.add_argument("--prec", type=int, help="precision bound on the outer index (precision mode)")


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgParser(prog="drwitt", description="de Rham-Witt forms of Laurent towers")
    subs = ap.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    w = subs.add_parser("witt", help="coordinate Witt vector arithmetic")
    _common(w)
    w.add_argument("op", choices=["add", "mul", "neg", "V", "F", "R", "Fbar", "teich-v", "level", "best-form"])
    w.add_argument("--a", help="coordinates (a_{m-1}, ..., a_0) as comma-separated ring expressions")
    w.add_argument("--b")
    w.add_argument("--input", help="JSON file with {\"a\": <witt>, \"b\": <witt>}")

    d = subs.add_parser("drw", help="evaluate and inspect de Rham-Witt forms")
    _common(d)
    d.add_argument("op", choices=["eval", "components", "parse", "to-witt", "goodness"])
    d.add_argument("expr", nargs="?")
    d.add_argument("--input")

    f = subs.add_parser("fil", help="Brylinski-Kato filtration")
    _common(f)
    f.add_argument("op", choices=["level", "member", "gr", "multi", "shift"])
    f.add_argument("expr", nargs="?")
    f.add_argument("--input")
    f.add_argument("-n", type=int)
    f.add_argument("-q", "--degree", type=int, default=0)
    f.add_argument("--l", type=int, default=1, help="monomial exponent for shift")
    f.add_argument("--witt", help="coordinates for Witt-vector level / membership")

    c = subs.add_parser("cartier", help="Cartier operator, Z_1 and Z_i / B_i")
    _common(c)
    c.add_argument("op", choices=["apply", "z1", "zb", "preimage", "one-minus-c"])
    c.add_argument("expr", nargs="?")
    c.add_argument("--input")
    c.add_argument("-i", type=int, default=1)
    c.add_argument("--section", default=cartier.DEFAULT_SECTION, choices=sorted(cartier.SECTIONS))
    c.add_argument("-n", type=int, help="filtration bound for z1")

    for name in ("swan", "rsw"):
        s = subs.add_parser(name, help="Swan conductor" if name == "swan" else "refined Swan conductor")
        _common(s)
        s.add_argument("--expr")
        s.add_argument("--input")
        s.add_argument("--witt", help="Witt coordinates of an H^1 character")

    v = subs.add_parser("verify", help="run a law suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--seed", default=None)
    v.add_argument("--samples", type=int)
    v.add_argument("--max-exp", type=int, dest="max_exp")
    v.add_argument("--workers", type=int)
    v.add_argument("--mutation")
    v.add_argument("--law", action="append", help="restrict to these law ids")
    v.add_argument("--primes", help="comma-separated primes (default 3,5)")
    v.add_argument("--lengths", help="comma-separated lengths (default 1,2,3)")
    v.add_argument("--depths", help="comma-separated depths (default 1,2)")
    v.add_argument("--powers", help="comma-separated residue degrees r (default 1,2)")
    v.add_argument("--experimental-p2", action="store_true")
    v.add_argument("--timing", action="store_true", help="include elapsed_ms (makes reports run-dependent)")
    v.add_argument("--output")
    v.add_argument("--config")
    v.add_argument("--pretty", action="store_true")

    g = subs.add_parser("gen-polys", help="universal Witt polynomials")
    g.add_argument("-p", "--prime", type=int, dest="p")
    g.add_argument("-m", "--length", type=int, dest="m")
    g.add_argument("--format", choices=["json"], default="json")
    g.add_argument("--config")
    g.add_argument("--pretty", action="store_true")
    return ap


# -- helpers --------------------------------------------------------------------------------

def _merge_config(args):
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, value in cfg.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _context(args):
    missing = [k for k in ("p", "m") if getattr(args, k, None) is None]
    if missing:
        raise UsageError(f"missing context: {', '.join('-' + k for k in missing)} (flags or --config)")
    r = args.r if args.r is not None else 1
    depth = args.depth if args.depth is not None else 1
    try:
        tower = TowerSpec(args.p, r, depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.m < 0:
        raise UsageError("length must be non-negative")
    return tower, args.m


def _echo(tower, m) -> dict:
    ctx = tower.context()
    ctx["m"] = m
    return ctx


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _form_arg(args, tower, m, key="expr") -> DrwForm:
    src = getattr(args, key, None)
    if src:
        return elaborate(parse_expr(src, tower), Context(tower, m, args.prec))
    if getattr(args, "input", None):
        data = _load_json(args.input)
        if isinstance(data, dict) and "form" in data:
            data = data["form"]
        return form_from_json(tower, data)
    raise UsageError("an expression or --input is required")


def _witt_arg(src, tower, m) -> WittVec:
    coords = parse_coords(src, tower)
    if len(coords) != m:
        raise UsageError(f"expected {m} coordinates, got {len(coords)}")
    return WittVec(tower, coords)


def _emit(payload: dict, pretty: bool, text: str | None = None):
    if pretty:
        print(text if text is not None else json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(json.dumps(payload, sort_keys=True, default=str))


def _level(x):
    return None if x == filtration.NEG_INF else int(x)


# -- commands ---------------------------------------------------------------------------------

def cmd_witt(args):
    tower, m = _context(args)
    if args.input:
        data = _load_json(args.input)
        a = WittVec.from_json(tower, data["a"])
        b = WittVec.from_json(tower, data["b"]) if "b" in data else None
    else:
        if not args.a:
            raise UsageError("--a is required")
        a = _witt_arg(args.a, tower, m)
        b = _witt_arg(args.b, tower, m) if args.b else None
    op = args.op
    out = {"context": _echo(tower, m), "op": op}
    if op in ("add", "mul"):
        if b is None:
            raise UsageError("--b is required")
        res = a + b if op == "add" else a * b
    elif op == "neg":
        res = -a
    elif op == "V":
        res = a.V()
    elif op == "F":
        res = a.F()
    elif op == "R":
        res = a.R()
    elif op == "Fbar":
        res = a.Fbar()
    elif op == "teich-v":
        form = from_witt(a)
        out["form"] = form.to_json()
        _emit(out, args.pretty, str(form))
        return EXIT_OK
    elif op == "level":
        out["level"] = _level(filtration.fil_level_witt(a))
        _emit(out, args.pretty, str(out["level"]))
        return EXIT_OK
    else:
        res = conductor.asw_best_form(a)
        out["level"] = _level(filtration.fil_level_witt(res))
    out["result"] = res.to_json()
    _emit(out, args.pretty, str(res))
    return EXIT_OK


def cmd_drw(args):
    tower, m = _context(args)
    if args.op == "parse":
        if not args.expr:
            raise UsageError("an expression is required")
        ast = parse_expr(args.expr, tower)
        out = {"context": _echo(tower, m), "canonical": print_expr(ast)}
        _emit(out, args.pretty, out["canonical"])
        return EXIT_OK
    x = _form_arg(args, tower, m)
    out = {"context": _echo(tower, m), "form": x.to_json(), "text": str(x)}
    if args.op == "components":
        out["components"] = out["form"].get("components")
    elif args.op == "to-witt":
        out["witt"] = to_witt(x).to_json()
    elif args.op == "goodness":
        a, b = filtration.goodness_decompose(x)
        out["a"], out["b"] = a.to_json(), b.to_json()
        out["text"] = f"V^{m - 1}({a}) + dV^{m - 1}({b})"
    _emit(out, args.pretty, out["text"])
    return EXIT_OK


def cmd_fil(args):
    tower, m = _context(args)
    out = {"context": _echo(tower, m), "op": args.op}
    if args.op == "gr":
        if args.n is None:
            raise UsageError("-n is required")
        shape = filtration.graded_rep(args.n, m, args.degree, tower.p)
        out.update({"n": shape.n, "index": shape.index, "s": shape.s, "i": shape.i,
                    "a_length": shape.a_length, "b_length": shape.b_length,
                    "shape": shape.describe(tower.var_names[-1])})
        if args.expr or args.input:
            out["class"] = filtration.gr_class(_form_arg(args, tower, m), args.n).to_json()
        _emit(out, args.pretty, out["shape"])
        return EXIT_OK
    if args.witt:
        a = _witt_arg(args.witt, tower, m)
        if args.op == "level":
            out["level"] = _level(filtration.fil_level_witt(a))
        elif args.op == "multi":
            out["levels"] = [_level(v) for v in filtration.fil_level_multi_witt(a)]
        elif args.op == "member":
            if args.n is None:
                raise UsageError("-n is required")
            out["member"] = filtration.fil_member_witt(a, args.n)
        else:
            raise UsageError(f"fil {args.op} does not take --witt")
        _emit(out, args.pretty)
        return EXIT_OK
    x = _form_arg(args, tower, m)
    if args.op == "level":
        out["level"] = _level(filtration.fil_level(x))
        text = str(out["level"])
    elif args.op == "multi":
        out["levels"] = [_level(v) for v in filtration.fil_level_multi(x)]
        text = str(out["levels"])
    elif args.op == "member":
        if args.n is None:
            raise UsageError("-n is required")
        out["member"] = filtration.fil_member(x, args.n)
        text = str(out["member"])
    else:
        y = filtration.shift_by_monomial(x, args.l)
        out["result"] = y.to_json()
        text = str(y)
    _emit(out, args.pretty, text)
    return EXIT_OK


def cmd_cartier(args):
    tower, m = _context(args)
    x = _form_arg(args, tower, m)
    out = {"context": _echo(tower, m), "op": args.op}
    if args.op == "apply":
        y = cartier.cartier_C(x, args.section)
        out["result"], text = y.to_json(), str(y)
    elif args.op == "one-minus-c":
        y = cartier.one_minus_C(x, args.section)
        out["result"], text = y.to_json(), str(y)
    elif args.op == "z1":
        out["z1"] = cartier.is_Z1(x, args.n)
        text = str(out["z1"])
    elif args.op == "preimage":
        ok, wit = cartier.is_F_image(x, args.i)
        out["image"] = ok
        out["witness"] = None if wit is None else wit.to_json()
        text = str(wit) if ok else "not an F-image"
    else:
        flags = cartier.zb_group_test(x, args.i)
        out.update(flags.to_json())
        text = f"Z_{args.i}: {flags.in_Z}, B_{args.i}: {flags.in_B}"
    _emit(out, args.pretty, text)
    return EXIT_OK


def cmd_swan(args, refined=False):
    tower, m = _context(args)
    if args.witt:
        x = from_witt(_witt_arg(args.witt, tower, m))
    else:
        x = _form_arg(args, tower, m)
    report = conductor.swan(conductor.AswCharacter(x))
    out = {"context": _echo(tower, m)}
    if refined:
        if report.sw == 0:
            from .errors import TameInput

            raise TameInput("character is tame (sw = 0); no refined Swan conductor")
        out.update({"sw": report.sw, "rsw": report.rsw.to_json(), "rsw_modulus": report.rsw_modulus,
                    "text": str(report.rsw)})
        _emit(out, args.pretty, f"rsw = {report.rsw}  (mod fil_{report.rsw_modulus})")
        return EXIT_OK
    out.update(report.to_json())
    out["text"] = {"reduced": str(report.reduced), "rsw": None if report.rsw is None else str(report.rsw)}
    text = f"sw = {report.sw}"
    if report.rsw is not None:
        text += f"\nrsw = {report.rsw}  (mod fil_{report.rsw_modulus})"
    _emit(out, args.pretty, text)
    return EXIT_OK


def _int_list(text, default):
    if not text:
        return tuple(default)
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


def cmd_verify(args):
    seed = args.seed if args.seed is not None else "0"
    samples = args.samples if args.samples is not None else 100
    bound = args.max_exp if args.max_exp is not None else 12
    primes = _int_list(args.primes, harness.DEFAULT_PRIMES)
    if args.experimental_p2 and 2 not in primes:
        primes = primes + harness.EXPERIMENTAL_PRIMES
    if 2 in primes and not args.experimental_p2:
        raise UsageError("p = 2 is experimental; pass --experimental-p2")
    grid = harness.default_grid(primes, _int_list(args.powers, (1, 2)), _int_list(args.depths, (1, 2)),
                                _int_list(args.lengths, (1, 2, 3)), -bound, bound)
    suite = harness.LawSuite.named(args.suite, seed=seed, samples=samples, grid=grid, laws=args.law)
    report = harness.run_suite(suite, mutation=args.mutation, workers=args.workers or 1, timing=args.timing)
    data = harness.report_bytes(report)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    if args.pretty:
        for entry in report["laws"]:
            print(f"{entry['status']:7s} {entry['id']}  ({entry['checked']} samples)")
    else:
        sys.stdout.write(data.decode())
    return EXIT_OK if report["passed"] else EXIT_REJECT


def cmd_gen_polys(args):
    if args.p is None or args.m is None:
        raise UsageError("-p and -m are required")
    table = gen_witt_polys(args.p, args.m)
    out = table.to_json()
    out["ghost_check"] = table.check_ghost()
    out["context"] = {"p": args.p, "m": args.m}
    _emit(out, args.pretty)
    return EXIT_OK


COMMANDS = {
    "witt": cmd_witt,
    "drw": cmd_drw,
    "fil": cmd_fil,
    "cartier": cmd_cartier,
    "swan": cmd_swan,
    "rsw": lambda a: cmd_swan(a, refined=True),
    "verify": cmd_verify,
    "gen-polys": cmd_gen_polys,
}


def _error(code, message, exit_code, extra=None):
    payload = {"error": code, "message": message}
    if extra:
        payload.update(extra)
    print(json.dumps(payload, sort_keys=True))
    return exit_code


def main(argv=None) -> int:
    try:
        args, extra = build_parser().parse_known_args(argv)
        # a trailing expression after the flags lands here (argparse binds optional positionals early)
        if extra and hasattr(args, "expr") and args.expr is None and len(extra) == 1 \
                and not extra[0].startswith("--"):
            args.expr = extra[0]
        elif extra:
            raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
        args = _merge_config(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _error("UsageError", str(exc), EXIT_USAGE)
    except DrwError as exc:
        extra = {}
        if hasattr(exc, "line"):
            extra = {"line": exc.line, "column": exc.column}
        return _error(exc.code, str(exc), EXIT_USAGE if exc.usage else EXIT_REJECT, extra)


if __name__ == "__main__":
    sys.exit(main())
