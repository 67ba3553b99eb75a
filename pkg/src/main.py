import logging
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from src.config.config_manager import RunConfig, load_config
from src.errors import InputError, PrimeMismatchError, VilenkinError
from src.masks import blocked_set_find, check_mask_hypotheses, parse_mask_file, phi_hat, scaling_criteria_check
from src.report import Status, Verdict, export_intervals, interval_frame, render_json, render_text, result_payload, weakest
from src.sets import format_set_file, parse_set_file
from src.wavelets import (
	check_multiwavelet_set,
	check_translation_congruence,
	check_wavelet_set,
	closure_verify,
	consistency_check,
	gss_from_wavelet,
	theorem47_check,
	upsilon_construct,
	verify_gss,
)

logger = logging.getLogger(__name__)

EXIT_CODES = {Status.PASS: 0, Status.PASS_CERTIFIED: 0, Status.FAIL: 1, Status.UNDECIDED: 2}
EXIT_INPUT_ERROR = 3

FILE = click.Path(dir_okay=False, path_type=Path)

input_option = click.option("--input", "-i", "inputs", multiple=True, type=FILE, help="set or mask file (repeatable)")
depth_option = click.option("--depth", type=int, help="stream enumeration depth J")
region_option = click.option("-R", "--region", type=int, help="region scale R (tables live on B^R U*)")
resolution_option = click.option("-K", "--resolution", type=int, help="table resolution K")
format_option = click.option("--format", "output_format", type=click.Choice(["text", "json"]), help="output format")
out_option = click.option("--out", "--export", "out", type=FILE, help="output path")


class VilenkinGroup(click.Group):
	"""Top-level group: usage errors exit with the input-error code instead of click's 2."""

	def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
		try:
			code = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
		except click.ClickException as err:
			click.echo(f"❌ {err.format_message()}", err=True)
			code = EXIT_INPUT_ERROR
		except click.Abort:
			code = EXIT_INPUT_ERROR
		code = code if isinstance(code, int) else 0
		if standalone_mode:
			sys.exit(code)
		return code


def build_config(cfg: dict, command: str, subcommand: str, **options) -> RunConfig:
	"""Merge CLI options over the loaded configuration."""
	resolution = options.get("resolution")
	if resolution is None and (command, subcommand) != ("mask", "phihat"):
		resolution = cfg["VILENKIN_RESOLUTION"]
	values = {
		"command": command,
		"subcommand": subcommand,
		"inputs": list(options.get("inputs") or ()),
		"depth": cfg["VILENKIN_DEPTH"] if options.get("depth") is None else options["depth"],
		"region": cfg["VILENKIN_REGION"] if options.get("region") is None else options["region"],
		"resolution": resolution,
		"output_format": options.get("output_format") or cfg["VILENKIN_FORMAT"],
		"tolerance": cfg["VILENKIN_FLOAT_TOLERANCE"],
		"max_cells": cfg["VILENKIN_MAX_CELLS"],
	}
	for key in ("n", "out", "closure_candidate", "from_wavelet_set"):
		values[key] = options.get(key)
	return RunConfig(**{k: v for k, v in values.items() if v is not None})


def _execute(ctx: click.Context, subcommand: str, options: dict) -> None:
	command = ctx.parent.info_name
	try:
		config = build_config(ctx.obj, command, subcommand, **options)
	except ValidationError as err:
		click.echo(f"❌ {err}", err=True)
		ctx.exit(EXIT_INPUT_ERROR)
	ctx.exit(run(config))


def _inputs(config: RunConfig, count: int | None = 1) -> list[Path]:
	if count is not None and len(config.inputs) != count:
		raise InputError(f"'{config.command} {config.subcommand}' takes {count} --input file(s), got {len(config.inputs)}")
	if not config.inputs:
		raise InputError(f"'{config.command} {config.subcommand}' needs at least one --input file")
	return list(config.inputs)


def _finite(path: Path, depth: int):
	stream = parse_set_file(path, depth)
	if not stream.is_finite():
		raise InputError("a finite set is required here", path=path)
	return stream.finite


def _verify(config: RunConfig):
	depth = config.depth
	if config.subcommand == "multiwavelet-set":
		streams = [parse_set_file(path, depth) for path in _inputs(config, None)]
		primes = {s.p for s in streams}
		if len(primes) > 1:
			raise PrimeMismatchError(f"input sets use different primes {sorted(primes)}")
		return streams[0].p, check_multiwavelet_set(streams, depth), {}

	stream = parse_set_file(_inputs(config)[0], depth)
	if config.subcommand == "wavelet-set":
		verdict = check_wavelet_set(stream, depth)
	elif config.subcommand == "congruence":
		verdict = check_translation_congruence(stream, depth)
	elif config.subcommand == "gss":
		verdict = verify_gss(stream, depth)
	elif config.subcommand == "consistency":
		verdict = consistency_check(stream, config.resolution, depth)
	else:
		verdict = theorem47_check(stream, depth)
	return stream.p, verdict, {}


def _construct(config: RunConfig):
	depth = config.depth
	if config.subcommand == "upsilon":
		u = _finite(_inputs(config)[0], depth)
		chain = upsilon_construct(u, config.n)
		sets = [f"upsilon_{k}: {s}" for k, s in enumerate(chain.sets)]
		return u.p, chain.verdict, {"sets": sets}

	source = config.from_wavelet_set or (_inputs(config)[0] if config.inputs else None)
	if source is None:
		raise InputError("'construct gss' needs --from-wavelet-set")
	omega = _finite(source, depth)
	construction = gss_from_wavelet(omega, depth)
	verdict = construction.verdict
	if config.closure_candidate is not None:
		candidate = _finite(config.closure_candidate, depth)
		verdict = weakest("scaling set from a wavelet set", [verdict, closure_verify(candidate, omega)])
		verdict.measures = construction.verdict.measures
		verdict.depth = depth
	text = format_set_file(construction.stream)
	if config.out is not None:
		config.out.parent.mkdir(parents=True, exist_ok=True)
		config.out.write_text(text, encoding="utf-8")
		click.echo(f"💾 Wrote {config.out}", err=True)
	return omega.p, verdict, {"set": text.splitlines()}


def _table_rows(table) -> list[str]:
	return ["\t".join(row) for row in interval_frame(table).itertuples(index=False)]


def _mask(config: RunConfig):
	m = parse_mask_file(_inputs(config)[0], tolerance=config.tolerance)
	if config.subcommand == "check":
		return m.p, check_mask_hypotheses(m), {}
	if config.subcommand == "blocked":
		result = blocked_set_find(m)
		verdict = Verdict.pass_("blocked-set search", conditions=[result.hypotheses, result.verdict])
		payload = {
			"mra": "yes" if result.mra else "no",
			"blocked_set": [c.token() for c in result.cylinders(m.prime, m.n)],
		}
		return m.p, verdict, payload

	table = phi_hat(m, config.region, config.resolution, max_cells=config.max_cells)
	verdict = scaling_criteria_check(m, config.region, max_cells=config.max_cells)
	if config.out is not None:
		export_intervals(table, config.out)
		click.echo(f"💾 Wrote {config.out}", err=True)
	return m.p, verdict, {"phi_hat": _table_rows(table)}


def _export(config: RunConfig):
	if config.out is None:
		raise InputError("'export intervals' needs --out")
	stream = parse_set_file(_inputs(config)[0], config.depth)
	path = export_intervals(stream, config.out, config.depth)
	verdict = Verdict.pass_("interval export", report=[f"wrote {path}"])
	if not stream.is_finite():
		verdict.depth = config.depth
		verdict.report.append(f"pieces enumerated to depth {config.depth}")
	return stream.p, verdict, {}


HANDLERS = {"verify": _verify, "construct": _construct, "mask": _mask, "export": _export}


def run(config: RunConfig) -> int:
	try:
		prime, verdict, payload = HANDLERS[config.command](config)
	except (VilenkinError, OSError) as err:
		click.echo(f"❌ {err}", err=True)
		return EXIT_INPUT_ERROR

	document = result_payload(f"{config.command} {config.subcommand}", prime, verdict, payload)
	if config.output_format == "json":
		click.echo(render_json(document))
	else:
		click.echo(render_text(document, verdict))
	logger.debug("%s finished with %s", document["command"], verdict.status.value)
	return EXIT_CODES[verdict.status]


# -- command tree ----------------------------------------------------------------


@click.group(cls=VilenkinGroup)
@click.pass_context
def cli(ctx):
	"""Wavelet sets, scaling sets and masks on the Vilenkin group."""
	cfg = load_config()
	logging.basicConfig(
		level=getattr(logging, str(cfg["LOG_LEVEL"]).upper(), logging.INFO),
		format="%(asctime)s %(levelname)s %(name)s: %(message)s",
		stream=sys.stderr,
	)
	ctx.obj = cfg


@cli.group()
def verify():
	"""Check a set against the wavelet and scaling-set conditions."""


@cli.group()
def construct():
	"""Build scaling sets and upsilon chains."""


@cli.group()
def mask():
	"""Analyse a Walsh-polynomial mask."""


@cli.group()
def export():
	"""Write a set as lambda*-intervals."""


@verify.command("wavelet-set")
@input_option
@depth_option
@format_option
@click.pass_context
def verify_wavelet_set(ctx, **options):
	"""Translation congruence to U* and dilation tiling."""
	_execute(ctx, "wavelet-set", options)


@verify.command("multiwavelet-set")
@input_option
@depth_option
@format_option
@click.pass_context
def verify_multiwavelet_set(ctx, **options):
	"""Joint dilation tiling and per-set congruence (repeat -i)."""
	_execute(ctx, "multiwavelet-set", options)


@verify.command("congruence")
@input_option
@depth_option
@format_option
@click.pass_context
def verify_congruence(ctx, **options):
	_execute(ctx, "congruence", options)


@verify.command("gss")
@input_option
@depth_option
@format_option
@click.pass_context
def verify_gss_command(ctx, **options):
	"""The four scaling-set conditions, then BS minus S as a wavelet set."""
	_execute(ctx, "gss", options)


@verify.command("consistency")
@input_option
@depth_option
@resolution_option
@format_option
@click.pass_context
def verify_consistency(ctx, **options):
	_execute(ctx, "consistency", options)


@verify.command("invariance")
@input_option
@depth_option
@format_option
@click.pass_context
def verify_invariance(ctx, **options):
	"""Neighbourhood of theta, B^-1 invariance and the consistency equation."""
	_execute(ctx, "invariance", options)


@construct.command("gss")
@input_option
@depth_option
@format_option
@out_option
@click.option("--from-wavelet-set", "from_wavelet_set", type=FILE, help="wavelet set omega")
@click.option("--closure-candidate", "closure_candidate", type=FILE, help="closed form to check the union against")
@click.pass_context
def construct_gss(ctx, **options):
	"""S = union over j >= 1 of B^-j omega."""
	_execute(ctx, "gss", options)


@construct.command("upsilon")
@input_option
@depth_option
@format_option
@click.option("-n", "n", type=int, default=0, show_default=True, help="length of the upsilon chain")
@click.pass_context
def construct_upsilon(ctx, **options):
	_execute(ctx, "upsilon", options)


@mask.command("check")
@input_option
@format_option
@click.pass_context
def mask_check(ctx, **options):
	"""Coefficient sum and QMF condition."""
	_execute(ctx, "check", options)


@mask.command("blocked")
@input_option
@format_option
@click.pass_context
def mask_blocked(ctx, **options):
	"""Search for a blocked set; the MRA answer goes in the payload."""
	_execute(ctx, "blocked", options)


@mask.command("phihat")
@input_option
@region_option
@resolution_option
@format_option
@out_option
@click.pass_context
def mask_phihat(ctx, **options):
	"""phi-hat on B^R U* and the scaling-function criteria."""
	_execute(ctx, "phihat", options)


@export.command("intervals")
@input_option
@depth_option
@format_option
@out_option
@click.pass_context
def export_intervals_command(ctx, **options):
	_execute(ctx, "intervals", options)


def main(argv=None) -> int:
	return cli.main(args=argv, prog_name="vilenkin", standalone_mode=False)


if __name__ == "__main__":
	sys.exit(main())
