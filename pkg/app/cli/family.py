"""pmg family: 用参数生成图族并计算"""
from typing import List, Sequence, Tuple

import click

from app.cli.options import compute_options, handle_errors, run_compute
from app.models.models import FamilySpec, PMGraph
from app.services.documents import dump_graph
from app.services.families import family_label, from_spec
from app.utils.rational import to_fraction


class RationalType(click.ParamType):
    """接受整数、"p/q" 或十进制写法的有理数"""

    name = "rational"

    def convert(self, value, param, ctx):
        try:
            return to_fraction(value)
        except ValueError:
            self.fail(f"无法解析为有理数: {value!r}", param, ctx)


RATIONAL = RationalType()

emit_graph_option = click.option(
    "--emit-graph", is_flag=True,
    help="只输出生成的图文件 (JSON)，不计算")


def _run(command: str, specs: Sequence[FamilySpec], emit_graph: bool,
         jobs: int = 1, **options) -> None:
    graphs: List[Tuple[str, PMGraph]] = [
        (family_label(spec), from_spec(spec)) for spec in specs]
    if emit_graph:
        for _, graph in graphs:
            click.echo(dump_graph(graph))
        return
    run_compute(command, graphs, jobs=jobs, **options)


@click.group("family")
def family():
    """示例图族: ladder, complete4, bouquet, circle, example3"""


@family.command("ladder")
@click.option("--n", "sizes", type=click.IntRange(min=2), multiple=True,
              required=True, help="横档数，可重复给出以输出多行")
@click.option("--a", type=RATIONAL, default="1", show_default=True,
              help="侧边长度")
@click.option("--b", type=RATIONAL, default="1", show_default=True,
              help="横档长度")
@click.option("--jobs", type=click.IntRange(min=1), default=1,
              show_default=True, help="并行进程数")
@emit_graph_option
@compute_options
@handle_errors
def ladder(sizes, a, b, jobs, emit_graph, **options):
    """梯子图 L_n(a,b)"""
    specs = [FamilySpec(family="ladder", parameters={"n": n, "a": a, "b": b})
             for n in sizes]
    _run("family ladder", specs, emit_graph, jobs=jobs, **options)


@family.command("complete4")
@click.option("--lengths", type=RATIONAL, nargs=6,
              default=("1/6",) * 6, show_default=True,
              help="六条边长，顺序 v0v1 v0v2 v0v3 v1v2 v1v3 v2v3")
@click.option("--k", type=click.IntRange(min=0), default=0,
              show_default=True, help="每个顶点的 q 值")
@emit_graph_option
@compute_options
@handle_errors
def complete4(lengths, k, emit_graph, **options):
    """完全图 K_4"""
    spec = FamilySpec(family="complete",
                      parameters={"n": 4, "lengths": list(lengths), "q": k})
    _run("family complete4", [spec], emit_graph, **options)


@family.command("bouquet")
@click.option("--loop", "loops", type=RATIONAL, multiple=True, required=True,
              help="自环长度，可重复")
@click.option("--q", type=click.IntRange(min=0), default=0, show_default=True)
@emit_graph_option
@compute_options
@handle_errors
def bouquet(loops, q, emit_graph, **options):
    """单顶点带若干自环"""
    spec = FamilySpec(family="bouquet",
                      parameters={"loops": list(loops), "q": q})
    _run("family bouquet", [spec], emit_graph, **options)


@family.command("circle")
@click.option("--length", type=RATIONAL, default="1", show_default=True)
@emit_graph_option
@compute_options
@handle_errors
def circle(length, emit_graph, **options):
    """长为 length 的圆 (一个顶点加一个自环)"""
    spec = FamilySpec(family="circle", parameters={"length": length})
    _run("family circle", [spec], emit_graph, **options)


@family.command("example3")
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.option("--c", type=RATIONAL, default="1", show_default=True)
@click.option("--d", type=RATIONAL, default="1", show_default=True)
@click.option("--e", type=RATIONAL, default="1", show_default=True)
@emit_graph_option
@compute_options
@handle_errors
def example3(a, b, c, d, e, emit_graph, **options):
    """ḡ = 12 的带自环示例图"""
    spec = FamilySpec(family="example3",
                      parameters={"a": a, "b": b, "c": c, "d": d, "e": e})
    _run("family example3", [spec], emit_graph, **options)
