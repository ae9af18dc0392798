"""Trainable skin detection and geometric face localization.

The pipeline: fit per-channel Gaussian statistics on pure-skin patches,
threshold per-pixel likelihoods at the minimum training likelihood,
clean the mask with binary morphology, extract dark feature blocks, and
match eye/mouth triangles to place a face box. Three classical
color-space classifiers (normalized rg, YCbCr, HSV) and an evaluation
harness round out the toolkit.
"""

from .baselines import (
    BaselineConfig,
    classify_hsv,
    classify_rg,
    classify_ycbcr,
    rgb_to_hsv,
    rgb_to_ycbcr,
    train_rg_histogram,
)
from .evaluation import (
    EvaluationReport,
    PixelEvaluationReport,
    evaluate,
    evaluate_pixels,
    iou,
    load_manifest,
)
from .face_geometry import (
    FaceBox,
    TriangleCandidate,
    face_box,
    face_box_frontal,
    face_box_left,
    face_box_right,
    match_frontal_triangle,
    match_side_triangle,
)
from .imaging import (
    FormatError,
    equalize_histogram,
    load_image,
    load_mask,
    save_image,
    save_mask,
)
from .pipeline import PipelineConfig, detect_faces, detect_skin, draw_box
from .segmentation import (
    FeatureBlock,
    NoSkinRegionError,
    classify_skin,
    connected_components,
    extract_dark_blocks,
    morph_close,
    morph_open,
    square_se,
)
from .skin_model import (
    KERNEL_GAUSSIAN,
    KERNEL_UNNORMALIZED,
    ChannelStats,
    EmptyTrainingSetError,
    SkinModel,
    fit_skin_model,
    gaussian_pdf,
    load_model,
    pixel_likelihood,
    save_model,
    train_skin_model,
    tune_threshold,
)
from .synthetic import (
    InfeasibleParamsError,
    SceneParams,
    generate_skin_patch,
    generate_synthetic_scene,
)

__version__ = "0.1.0"
