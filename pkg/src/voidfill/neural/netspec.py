"""Network architecture as data: layer lists, text format, weight slots.

The generator has a coarse stage, two refinement encoder branches (A:
dilated convolutions, B: contextual attention) whose outputs concatenate
channel-wise, and a decoder. Critics are plain sequential stacks whose
scalar score is the global sum of the final feature map.

Text format, one layer per line, '#' comments::

    coarse
    conv in=2 out=32 k=5 s=1 d=1
    elu
    lfe ch=64
    upsample x2
    tanh
    refine
    branch A
    ...
    branch B
    attention patch=3 lambda=10
    decoder
    ...
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DataError
from .ops import lfe_dilations

DIFFERENTIABLE_KINDS = frozenset({"conv", "elu", "tanh", "upsample", "lfe"})
LAYER_KINDS = DIFFERENTIABLE_KINDS | {"attention"}


@dataclass(frozen=True)
class LayerSpec:
    """One layer of a stage; the fields used depend on `kind`."""

    kind: str
    in_ch: int = 0
    out_ch: int = 0
    kernel: int = 3
    stride: int = 1
    dilation: int = 1
    channels: int = 0  # lfe
    patch: int = 3  # attention
    temperature: float = 10.0  # attention softmax scale
    factor: int = 2  # upsample

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise DataError(f"unknown layer kind {self.kind!r}")


@dataclass(frozen=True)
class NetworkSpec:
    """Layer-graph description of the two-stage generator."""

    name: str
    coarse: tuple[LayerSpec, ...]
    branch_a: tuple[LayerSpec, ...]
    branch_b: tuple[LayerSpec, ...]
    decoder: tuple[LayerSpec, ...]

    def stages(self):
        return (
            ("coarse", self.coarse),
            ("branch_a", self.branch_a),
            ("branch_b", self.branch_b),
            ("decoder", self.decoder),
        )


@dataclass(frozen=True)
class CriticSpec:
    """Sequential conv stack; the score is the sum of the last feature map."""

    name: str
    layers: tuple[LayerSpec, ...] = field(default_factory=tuple)


def conv(in_ch: int, out_ch: int, kernel: int = 3, stride: int = 1, dilation: int = 1) -> LayerSpec:
    return LayerSpec("conv", in_ch=in_ch, out_ch=out_ch, kernel=kernel, stride=stride, dilation=dilation)


def elu() -> LayerSpec:
    return LayerSpec("elu")


def tanh() -> LayerSpec:
    return LayerSpec("tanh")


def lfe(channels: int) -> LayerSpec:
    return LayerSpec("lfe", channels=channels)


def attention(patch: int = 3, temperature: float = 10.0) -> LayerSpec:
    return LayerSpec("attention", patch=patch, temperature=temperature)


def upsample(factor: int = 2) -> LayerSpec:
    return LayerSpec("upsample", factor=factor)


# ---------------------------------------------------------------------------
# Channel/shape validation
# ---------------------------------------------------------------------------


def trace_channels(layers, in_ch: int, stage: str) -> tuple[int, float]:
    """Walk a stage checking channel compatibility.

    Returns (output channels, cumulative spatial scale) where scale 1 means
    the stage preserves resolution.
    """
    ch = in_ch
    scale = 1.0
    for idx, layer in enumerate(layers):
        where = f"{stage}[{idx}]"
        if layer.kind == "conv":
            if layer.in_ch != ch:
                raise DataError(f"{where}: conv expects {layer.in_ch} channels, gets {ch}")
            if layer.out_ch < 1 or layer.kernel < 1 or layer.stride < 1 or layer.dilation < 1:
                raise DataError(f"{where}: conv parameters must be positive")
            ch = layer.out_ch
            scale /= layer.stride
        elif layer.kind == "lfe":
            if layer.channels != ch:
                raise DataError(f"{where}: lfe expects {layer.channels} channels, gets {ch}")
        elif layer.kind == "upsample":
            if layer.factor < 2:
                raise DataError(f"{where}: upsample factor must be >= 2")
            scale *= layer.factor
        elif layer.kind == "attention":
            if layer.patch < 1 or layer.patch % 2 == 0:
                raise DataError(f"{where}: attention patch must be odd and positive")
        # elu/tanh preserve channels and resolution
    return ch, scale


def validate_network(spec: NetworkSpec, in_ch: int = 2) -> None:
    """Check stage wiring: coarse is 1-channel at input resolution, branches
    share an output resolution, and the decoder restores full resolution."""
    ch, scale = trace_channels(spec.coarse, in_ch, "coarse")
    if ch != 1 or scale != 1.0:
        raise DataError(f"coarse stage must end 1-channel at input resolution, got {ch} ch x{scale}")
    ch_a, scale_a = trace_channels(spec.branch_a, in_ch, "branch_a")
    ch_b, scale_b = trace_channels(spec.branch_b, in_ch, "branch_b")
    if scale_a != scale_b:
        raise DataError(f"branch scales differ: A x{scale_a}, B x{scale_b}")
    ch_d, scale_d = trace_channels(spec.decoder, ch_a + ch_b, "decoder")
    if ch_d != 1 or scale_a * scale_d != 1.0:
        raise DataError(
            f"decoder must end 1-channel at input resolution, got {ch_d} ch x{scale_a * scale_d}"
        )


def validate_critic(spec: CriticSpec, in_ch: int = 1) -> None:
    for layer in spec.layers:
        if layer.kind not in ("conv", "elu", "tanh"):
            raise DataError(f"critic layers must be conv/elu/tanh, got {layer.kind!r}")
    if not spec.layers:
        raise DataError("critic needs at least one layer")
    ch, _ = trace_channels(spec.layers, in_ch, "critic")
    if ch != 1:
        raise DataError(f"non-scalar critic head: final map has {ch} channels")


# ---------------------------------------------------------------------------
# Weight slots
# ---------------------------------------------------------------------------


def layer_slots(prefix: str, idx: int, layer: LayerSpec):
    """(name, shape) weight slots contributed by one layer."""
    slots = []
    if layer.kind == "conv":
        base = f"{prefix}.{idx:02d}"
        slots.append((f"{base}.w", (layer.out_ch, layer.in_ch, layer.kernel, layer.kernel)))
        slots.append((f"{base}.b", (layer.out_ch,)))
    elif layer.kind == "lfe":
        ch = layer.channels
        for j in range(len(lfe_dilations())):
            base = f"{prefix}.{idx:02d}.lfe{j}"
            slots.append((f"{base}.w", (ch, ch, 3, 3)))
            slots.append((f"{base}.b", (ch,)))
    return slots


def stage_slots(prefix: str, layers) -> list[tuple[str, tuple[int, ...]]]:
    slots = []
    for idx, layer in enumerate(layers):
        slots.extend(layer_slots(prefix, idx, layer))
    return slots


def enumerate_weight_slots(spec: NetworkSpec | CriticSpec) -> list[tuple[str, tuple[int, ...]]]:
    """Ordered (name, shape) parameter slots for a network or critic."""
    if isinstance(spec, CriticSpec):
        return stage_slots("critic", spec.layers)
    slots = []
    for stage, layers in spec.stages():
        slots.extend(stage_slots(stage, layers))
    return slots


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def _parse_kv(parts, lineno, allowed):
    out = {}
    for part in parts:
        if "=" not in part:
            raise DataError(f"network spec line {lineno}: expected key=value, got {part!r}")
        key, value = part.split("=", 1)
        if key not in allowed:
            raise DataError(f"network spec line {lineno}: unknown parameter {key!r}")
        out[key] = value
    return out


def _parse_layer(tokens, lineno) -> LayerSpec:
    kind = tokens[0]
    if kind == "conv":
        kv = _parse_kv(tokens[1:], lineno, {"in", "out", "k", "s", "d"})
        for req in ("in", "out"):
            if req not in kv:
                raise DataError(f"network spec line {lineno}: conv needs {req}=")
        return conv(
            int(kv["in"]),
            int(kv["out"]),
            kernel=int(kv.get("k", 3)),
            stride=int(kv.get("s", 1)),
            dilation=int(kv.get("d", 1)),
        )
    if kind == "lfe":
        kv = _parse_kv(tokens[1:], lineno, {"ch"})
        if "ch" not in kv:
            raise DataError(f"network spec line {lineno}: lfe needs ch=")
        return lfe(int(kv["ch"]))
    if kind == "attention":
        kv = _parse_kv(tokens[1:], lineno, {"patch", "lambda"})
        return attention(patch=int(kv.get("patch", 3)), temperature=float(kv.get("lambda", 10.0)))
    if kind == "upsample":
        factor = 2
        if len(tokens) > 1:
            if not tokens[1].startswith("x"):
                raise DataError(f"network spec line {lineno}: upsample factor looks like x2")
            factor = int(tokens[1][1:])
        return upsample(factor)
    if kind in ("elu", "tanh"):
        return LayerSpec(kind)
    raise DataError(f"network spec line {lineno}: unknown layer {kind!r}")


def parse_network_spec(text: str, name: str = "network") -> NetworkSpec:
    sections: dict[str, list[LayerSpec]] = {
        "coarse": [],
        "branch_a": [],
        "branch_b": [],
        "decoder": [],
    }
    current: list[LayerSpec] | None = None
    in_refine = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if head == "coarse" and len(tokens) == 1:
            current, in_refine = sections["coarse"], False
        elif head == "refine" and len(tokens) == 1:
            current, in_refine = None, True
        elif head == "branch":
            if not in_refine or len(tokens) != 2 or tokens[1] not in ("A", "B"):
                raise DataError(f"network spec line {lineno}: expected 'branch A' or 'branch B' inside refine")
            current = sections["branch_a"] if tokens[1] == "A" else sections["branch_b"]
        elif head == "decoder" and len(tokens) == 1:
            if not in_refine:
                raise DataError(f"network spec line {lineno}: decoder must follow refine")
            current = sections["decoder"]
        else:
            if current is None:
                raise DataError(f"network spec line {lineno}: layer before any section header")
            current.append(_parse_layer(tokens, lineno))
    spec = NetworkSpec(
        name=name,
        coarse=tuple(sections["coarse"]),
        branch_a=tuple(sections["branch_a"]),
        branch_b=tuple(sections["branch_b"]),
        decoder=tuple(sections["decoder"]),
    )
    validate_network(spec)
    return spec


def _format_layer(layer: LayerSpec) -> str:
    if layer.kind == "conv":
        return (
            f"conv in={layer.in_ch} out={layer.out_ch} "
            f"k={layer.kernel} s={layer.stride} d={layer.dilation}"
        )
    if layer.kind == "lfe":
        return f"lfe ch={layer.channels}"
    if layer.kind == "attention":
        return f"attention patch={layer.patch} lambda={layer.temperature:g}"
    if layer.kind == "upsample":
        return f"upsample x{layer.factor}"
    return layer.kind


def format_network_spec(spec: NetworkSpec) -> str:
    lines = [f"# {spec.name}", "coarse"]
    lines += [_format_layer(l) for l in spec.coarse]
    lines.append("refine")
    lines.append("branch A")
    lines += [_format_layer(l) for l in spec.branch_a]
    lines.append("branch B")
    lines += [_format_layer(l) for l in spec.branch_b]
    lines.append("decoder")
    lines += [_format_layer(l) for l in spec.decoder]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Canonical desk-scale architecture
# ---------------------------------------------------------------------------


def canonical_network(name: str = "desk32") -> NetworkSpec:
    """Small fixed generator: widths 32/64, two stride-2 downsamplings per
    encoder, LFE at the bottleneck, nearest-neighbor upsampling decoder."""

    def encoder():
        return [
            conv(2, 32, kernel=5),
            elu(),
            conv(32, 32, stride=2),
            elu(),
            conv(32, 64, stride=2),
            elu(),
        ]

    def up_decoder(in_ch):
        return [
            conv(in_ch, 64),
            elu(),
            upsample(2),
            conv(64, 32),
            elu(),
            upsample(2),
            conv(32, 32),
            elu(),
            conv(32, 1),
            tanh(),
        ]

    spec = NetworkSpec(
        name=name,
        coarse=tuple(encoder() + [lfe(64)] + up_decoder(64)[2:]),
        branch_a=tuple(encoder() + [lfe(64)]),
        branch_b=tuple(encoder() + [attention(patch=3, temperature=10.0)]),
        decoder=tuple(up_decoder(128)),
    )
    validate_network(spec)
    return spec


def canonical_critic(name: str = "critic32") -> CriticSpec:
    spec = CriticSpec(
        name=name,
        layers=(
            conv(1, 32, kernel=5, stride=2),
            elu(),
            conv(32, 64, stride=2),
            elu(),
            conv(64, 1),
        ),
    )
    validate_critic(spec)
    return spec
