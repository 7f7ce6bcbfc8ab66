import json
from pathlib import Path

import click

from app.cli.compute import read_graph
from app.cli.options import handle_errors
from app.middleware.logging_middleware import log_invocation
from app.services.graph import canonical_weights, genus, \
    raise_for_violations, total_length, validate
from app.utils.rational import format_fraction


@click.command("check")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--require-effective", is_flag=True,
              help="同时要求典范除子有效 (计算 θ 及导出量的前提)")
@click.option("--format", "report_format", type=click.Choice(["json", "text"]),
              default="text", show_default=True)
@handle_errors
def check(input_path: Path, require_effective: bool, report_format: str):
    """只做校验和亏格计算；有违规时列出全部并以退出码 2 结束"""
    with log_invocation("check", path=str(input_path)):
        graph = read_graph(input_path)
        outcome = validate(graph, require_effective=require_effective)

        if not outcome.ok:
            for violation in outcome.violations:
                click.echo(f"{violation.kind}: {violation.subject} "
                           f"{violation.detail}", err=True)
            raise_for_violations(outcome)

        data = genus(graph)
        weights = canonical_weights(graph)
        summary = {
            "vertices": len(graph.vertices),
            "edges": len(graph.edges),
            "loops": len(graph.loops),
            "length": format_fraction(total_length(graph)),
            "g": data.g,
            "gbar": data.gbar,
            "effective": all(w >= 0 for w in weights.values()),
        }

    if report_format == "json":
        click.echo(json.dumps(summary, indent=2))
    else:
        for key, value in summary.items():
            click.echo(f"{key}: {value}")
