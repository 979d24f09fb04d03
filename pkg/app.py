"""
shiftlab 명령줄 도구
단체 복합체의 shift, depth, 교차 집합족 상한을 작은 예제에서 계산하고 검증한다.

종료 코드: 0 = 성립/완료, 1 = 상한 위반 또는 반례, 2 = 입력/가정 오류, 3 = 자원/일반성 한도
"""
import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv

# 프로젝트 루트 경로 추가
sys.path.insert(0, str(Path(__file__).parent))

from models.complex import Complex, SetFamily, VertexPrefix
from models.exceptions import InputFormatError, InvalidConfig, ShiftLabError
from models.graph import independence_complex
from models.schemas import RunConfig
from services.generators import GeneratorService
from services.homology import HomologyService
from services.intersecting import EkrService
from services.shifting import ShiftingService
from utils.complex_io import FacetFileParser
from utils.validators import ConfigValidator
from components.result_display import (
    Payload,
    format_payload,
    render_complex_shift,
    render_cross,
    render_depth,
    render_ekr,
    render_family_shift,
    render_hibi,
    render_info,
    render_reduction,
    render_shift_properties,
    render_stability,
    render_stability_trace,
    render_vd,
)

logger = logging.getLogger("shiftlab")

EXIT_OK = 0
EXIT_VIOLATION = 1

Outcome = Tuple[Payload, int]


def init_services(config: RunConfig) -> Dict[str, object]:
    """서비스 초기화 (동일 소수 p 와 캐시 공유)"""
    homology = HomologyService(config.prime)
    shifting = ShiftingService(config.prime, homology=homology)
    return {
        "homology": homology,
        "shifting": shifting,
        "ekr": EkrService(
            config.prime,
            face_limit=config.limit_faces,
            budget=config.budget,
            cross_limit=config.cross_limit,
            seeds=config.seeds,
            homology=homology,
            shifting=shifting,
        ),
        "generators": GeneratorService(),
    }


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    명령줄 인자로 RunConfig 생성 및 검증

    Raises:
        InvalidConfig: 설정 검증 실패
    """
    config = RunConfig(
        prime=args.prime,
        seeds=list(args.seeds) if args.seeds else RunConfig.default_seeds(),
        limit_faces=args.limit_faces,
        budget=args.budget,
        cross_limit=args.cross_limit,
        output_format=args.format,
        inputs=[value for value in (getattr(args, "path", None), getattr(args, "family", None)) if value],
        out=args.out,
    )
    is_valid, message = ConfigValidator.validate(config)
    if not is_valid:
        raise InvalidConfig(message)
    return config


def resolve_vertices(labels: Sequence[str], names: Sequence[str]) -> List[int]:
    """정점 라벨을 인덱스로"""
    index = {label: i for i, label in enumerate(labels)}
    missing = [name for name in names if name not in index]
    if missing:
        raise InputFormatError(f"알 수 없는 정점 라벨: {missing}")
    return [index[name] for name in names]


def resolve_prefix(complex_: Complex, labels: Sequence[str], names: Sequence[str]) -> VertexPrefix:
    return VertexPrefix.of(resolve_vertices(labels, names), complex_.n_vertices)


def load_family(path: Optional[str], labels: Sequence[str]) -> Optional[SetFamily]:
    return FacetFileParser.load_family(path, labels) if path else None


# 명령 처리
def cmd_info(args, services, complex_: Complex, labels) -> Outcome:
    return render_info(complex_, labels), EXIT_OK


def cmd_depth(args, services, complex_: Complex, labels) -> Outcome:
    report = services["homology"].depth(complex_, cross_check=not args.no_cross_check)
    return render_depth(report, labels), EXIT_OK


def cmd_vd(args, services, complex_: Complex, labels) -> Outcome:
    return render_vd(services["homology"].is_vertex_decomposable(complex_), labels), EXIT_OK


def cmd_shift(args, services, complex_: Complex, labels) -> Outcome:
    shifting: ShiftingService = services["shifting"]
    family = load_family(args.family, labels)

    if args.mode == "alg":
        if family is not None:
            result = shifting.stable_alg_shift_family(family, args.config.seeds)
            return render_family_shift(result.shifted, labels, agreeing_seeds=result.agreeing_seeds), EXIT_OK
        result = shifting.stable_alg_shift_complex(complex_, args.config.seeds)
        return render_complex_shift(result.shifted, labels, agreeing_seeds=result.agreeing_seeds), EXIT_OK

    pairs = None
    if args.pair:
        pairs = [tuple(resolve_vertices(labels, pair)) for pair in args.pair]
    elif args.prefix:
        pairs = ShiftingService.prefix_pairs(resolve_prefix(complex_, labels, args.prefix), complex_.n_vertices)

    if family is not None:
        if pairs is None:
            trace = shifting.stabilize_full(family)
        else:
            trace = shifting.stabilize(family, pairs)
        return render_family_shift(trace.outcome, labels, trace), EXIT_OK
    shifted, steps, reclosed = shifting.stabilize_complex(complex_, pairs)
    return render_complex_shift(shifted, labels, steps, reclosed=reclosed), EXIT_OK


def cmd_shift_props(args, services, complex_: Complex, labels) -> Outcome:
    family = load_family(args.family, labels)
    report = services["shifting"].verify_shift_properties(complex_, family, args.config.seeds)
    return render_shift_properties(report), EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_ekr(args, services, complex_: Complex, labels) -> Outcome:
    report = services["ekr"].check_ekr(complex_, args.r, strict=args.strict)
    return render_ekr(report, labels), EXIT_VIOLATION if report.violation else EXIT_OK


def cmd_hm(args, services, complex_: Complex, labels) -> Outcome:
    prefix = resolve_prefix(complex_, labels, args.prefix)
    report = services["ekr"].check_stability(complex_, args.r, prefix)
    return render_stability(report, labels), EXIT_OK if report.holds else EXIT_VIOLATION


def cmd_cross(args, services, complex_: Complex, labels) -> Outcome:
    ekr: EkrService = services["ekr"]
    prefix = resolve_prefix(complex_, labels, args.prefix)
    if args.family_a or args.family_b:
        if not (args.family_a and args.family_b):
            raise InputFormatError("--family-a와 --family-b를 함께 지정해야 합니다")
        first = FacetFileParser.load_family(args.family_a, labels)
        second = FacetFileParser.load_family(args.family_b, labels)
        report = ekr.check_cross_sperner(complex_, args.r, prefix, first, second)
    elif args.shadow:
        report = ekr.check_cross_shadow(complex_, args.r, prefix)
    else:
        report = ekr.check_cross_classic(complex_, args.r, prefix)
    return render_cross(report, labels), EXIT_OK if report.holds else EXIT_VIOLATION


def cmd_hibi(args, services, complex_: Complex, labels) -> Outcome:
    result = services["ekr"].hibi_injection(complex_, args.s, args.r)
    d = complex_.min_facet_size
    expected = args.s <= args.r <= d - args.s
    violated = expected and not result.exists
    return render_hibi(result, labels, expected), EXIT_VIOLATION if violated else EXIT_OK


def cmd_reduce(args, services, complex_: Complex, labels) -> Outcome:
    ekr: EkrService = services["ekr"]
    family = FacetFileParser.load_family(args.family, labels)
    if args.prefix:
        trace = ekr.stability_trace(complex_, family, resolve_prefix(complex_, labels, args.prefix))
        payload = render_stability_trace(trace, labels)
    else:
        if args.apex is None:
            raise InputFormatError("--apex 또는 --prefix가 필요합니다")
        (apex,) = resolve_vertices(labels, [args.apex])
        trace = ekr.reduction_trace(complex_, family, apex)
        payload = render_reduction(trace, labels)
    return payload, EXIT_OK if trace.verified else EXIT_VIOLATION


def generate(args, services) -> Tuple[Complex, Optional[List[str]]]:
    """gen 하위 명령의 종류별 생성"""
    generators: GeneratorService = services["generators"]
    kind = args.kind
    if kind == "chordal":
        graph = generators.gen_chordal(args.n, args.extra, args.seed)
    elif kind == "union":
        parts = []
        for part in args.parts or []:
            name, _, size = part.partition(":")
            if not size.isdigit():
                raise InputFormatError(f"구성 요소는 kind:size 형식이어야 합니다: {part}")
            parts.append((name, int(size)))
        graph = generators.gen_disjoint_union(parts)
    elif kind == "threshold":
        letters = {"i": "isolated", "d": "dominating"}
        word = [letters.get(letter, letter) for letter in (args.word or [])]
        graph = generators.gen_threshold(len(word), word)
    else:
        graph = None

    if graph is not None:
        logger.info(f"Generated graph: n={graph.n}, edges={len(graph.edges)}, metadata={graph.metadata}")
        return independence_complex(graph), None
    if kind == "matroid":
        return generators.gen_uniform_matroid(args.n, args.k, args.coloops), None
    if kind == "simplex":
        return generators.gen_simplex(args.n), None
    if kind == "boundary":
        return generators.gen_simplex_boundary(args.n), None
    if kind == "borg":
        return generators.gen_borg_shape(args.t, args.sizes or []), None
    if kind == "random":
        complex_ = generators.gen_random_complex(args.n, args.dim, args.density, args.seed)
        return generators.gen_cone(complex_, args.t), None
    if kind == "cone":
        if not args.input:
            raise InputFormatError("cone 생성에는 --input 복합체 파일이 필요합니다")
        base, labels = FacetFileParser.load_complex(args.input)
        apex_labels = [f"c{i}" for i in range(args.t)]
        return generators.gen_cone(base, args.t), apex_labels + labels
    raise InputFormatError(f"알 수 없는 생성 종류: {kind}")


def cmd_gen(args, services) -> int:
    complex_, labels = generate(args, services)
    if args.out:
        FacetFileParser.write_complex(args.out, complex_, labels, args.format if args.format == "json" else None)
        logger.info(f"Wrote {args.out}: {complex_!r}")
    else:
        sys.stdout.write(FacetFileParser.dump_complex(complex_, labels, args.format))
    return EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "depth": cmd_depth,
    "vd": cmd_vd,
    "shift": cmd_shift,
    "shift-props": cmd_shift_props,
    "ekr": cmd_ekr,
    "hm": cmd_hm,
    "cross": cmd_cross,
    "hibi": cmd_hibi,
    "reduce": cmd_reduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=RunConfig.prime, help="계산에 쓸 소수 p")
    common.add_argument("--seeds", type=int, nargs="+", help="대수적 shift 시드 (기본: SHIFTLAB_SEED부터 3개)")
    common.add_argument("--limit-faces", type=int, default=RunConfig.limit_faces, help="탐색할 면 개수 한도")
    common.add_argument("--budget", type=int, default=RunConfig.budget, help="탐색 노드 예산")
    common.add_argument("--cross-limit", type=int, default=RunConfig.cross_limit, help="cross 열거 면 개수 한도")
    common.add_argument("--format", choices=ConfigValidator.VALID_FORMATS, default="text", help="출력 형식")
    common.add_argument("--out", help="결과를 쓸 파일 (기본: 표준 출력)")

    parser = argparse.ArgumentParser(prog="shiftlab", description="단체 복합체 shift 와 EKR 검증 도구")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        cmd.add_argument("path", help="facet 파일 (.txt 또는 .json)")
        return cmd

    command("info", "f-vector, near-cone apex, 최대 shifted prefix")
    depth = command("depth", "F_p 계수 depth")
    depth.add_argument("--no-cross-check", action="store_true", help="skeleton 정의로 다시 계산하지 않음")
    command("vd", "vertex-decomposability 판정")

    shift = command("shift", "조합적 또는 대수적 shift")
    shift.add_argument("--mode", choices=("comb", "alg"), default="alg")
    shift.add_argument("--family", help="복합체 대신 shift 할 집합족 파일")
    shift.add_argument("--pair", nargs=2, action="append", metavar=("V", "W"), help="허용할 Shift_{V<-W}")
    shift.add_argument("--prefix", nargs="+", help="prefix 에 대한 shift 만 허용")

    props = command("shift-props", "대수적 shift 성질 검사")
    props.add_argument("--family", help="교차 성질 검사에 쓸 집합족 파일")

    ekr = command("ekr", "EKR 상한 검사")
    ekr.add_argument("-r", type=int, required=True)
    ekr.add_argument("--strict", action="store_true", help="strict EKR 도 검사")

    hm = command("hm", "공통 교집합 없는 교차 집합족 상한")
    hm.add_argument("-r", type=int, required=True)
    hm.add_argument("--prefix", nargs="+", required=True, help="v_1 ... v_{r+1}")

    cross = command("cross", "cross-intersecting 상한")
    cross.add_argument("-r", type=int, required=True)
    cross.add_argument("--prefix", nargs="+", required=True, help="v_1 ... v_r")
    cross.add_argument("--shadow", action="store_true", help="(r-1)-면과 r-면 쌍")
    cross.add_argument("--family-a", help="Sperner 변형의 첫 집합족 파일")
    cross.add_argument("--family-b", help="Sperner 변형의 둘째 집합족 파일")

    hibi = command("hibi", "포함 관계 단사 F_s → F_r")
    hibi.add_argument("-s", type=int, required=True)
    hibi.add_argument("-r", type=int, required=True)

    reduce_cmd = command("reduce", "apex shift 축소 과정 재현")
    reduce_cmd.add_argument("family", help="교차 집합족 파일")
    reduce_cmd.add_argument("--apex", help="near-cone apex 라벨")
    reduce_cmd.add_argument("--prefix", nargs="+", help="지정하면 안정성 증명의 두 경우를 재현")

    gen = sub.add_parser("gen", parents=[common], help="예제 복합체 생성")
    gen.add_argument(
        "kind",
        choices=("chordal", "union", "threshold", "matroid", "cone", "borg", "random", "simplex", "boundary"),
    )
    gen.add_argument("--n", type=int, default=1)
    gen.add_argument("--extra", type=int, default=0, help="chordal: 고립 정점 수")
    gen.add_argument("--seed", type=int, help="난수 시드")
    gen.add_argument("--parts", nargs="+", help="union: path:4 cycle:5 complete:3")
    gen.add_argument("--word", nargs="+", help="threshold: i/d 또는 isolated/dominating")
    gen.add_argument("--k", type=int, default=1, help="matroid: rank")
    gen.add_argument("--coloops", type=int, default=0, help="matroid: coloop 수")
    gen.add_argument("--t", type=int, default=0, help="cone/borg/random: cone 차수")
    gen.add_argument("--sizes", type=int, nargs="+", help="borg: 단체 크기들")
    gen.add_argument("--dim", type=int, default=1, help="random: facet 차원")
    gen.add_argument("--density", type=float, default=0.5, help="random: facet 선택 확률")
    gen.add_argument("--input", help="cone: 원래 복합체 파일")
    return parser


def write_output(content: str, out: Optional[str]) -> None:
    if out:
        FacetFileParser.write_atomic(out, content)
    else:
        sys.stdout.write(content)


def run(args: argparse.Namespace) -> int:
    config = build_config(args)
    args.config = config
    services = init_services(config)
    if args.command == "gen":
        return cmd_gen(args, services)
    complex_, labels = FacetFileParser.load_complex(args.path)
    payload, code = COMMANDS[args.command](args, services, complex_, labels)
    write_output(format_payload(payload, config.output_format), config.out)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """메인 진입점"""
    load_dotenv()
    logging.basicConfig(
        level=os.getenv("SHIFTLAB_LOG_LEVEL", "WARNING").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ShiftLabError as e:
        logger.debug("Command failed", exc_info=True)
        sys.stderr.write(f"오류: {e}\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
