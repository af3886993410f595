"""Planar hyperbolic IFS attractors, fractal tops, and fractal
transformations between attractors."""

from .codespace import (
    EQUAL,
    GREATER,
    LESS,
    MAX_DEPTH,
    Prefix,
    ReverseAccumulator,
    acc_push,
    code_metric,
    concat,
    format_address,
    parse_address,
    shift,
    tops_compare,
)
from .config import ConfigError, parse_ifs_config, serialize_ifs_config
from .gallery import (
    CollinearPointsError,
    TriangleSpec,
    affine_from_correspondence,
    dragon_ifs,
    fern_ifs,
    make_ifs,
    mask_picture,
    square_cts_ifs,
    square_disc_ifs,
    table1_comparison,
    table1_reference,
    triangle_family,
)
from .ifs import (
    IFS,
    AffineMap2,
    IFSError,
    NotContractiveError,
    Point,
    SingularMapError,
    Viewport,
    UNIT_SQUARE,
    apply_map,
    compose,
    contraction_factor,
    default_probabilities,
    fixed_point,
    ifs_contraction,
    invert_map,
    validate_hyperbolic,
)
from .imageio import PpmError, ppm_read, ppm_write
from .raster import (
    AttractorMask,
    EmptyMaskError,
    PixelGrid,
    RasterPicture,
    RenderBudgetError,
    chaos_points,
    hausdorff_pixels,
    image_masks,
    mask_membership,
    phi_eval,
    phi_eval_batch,
    render_adaptive,
    render_chaos,
    render_deterministic,
    required_depth,
)
from .rng import prng_next, prng_stream, select_symbol, select_symbols
from .tops import (
    BranchLimitError,
    DomainPartition,
    Itinerary,
    OffAttractorError,
    build_partition,
    enumerate_addresses,
    shift_complexity,
    tops_orbit,
    tops_orbits_batch,
    tops_step,
)
from .transform import (
    ConsistentWithRefinement,
    TopsRecord,
    TransformReport,
    Violation,
    apply_records,
    area_probe,
    color_steal,
    color_steal_records,
    continuity_probe,
    refinement_check,
    transform_picture_deterministic,
    transform_point,
    transform_points,
)

__version__ = "0.1.0"
