"""Explainable credit-default modeling.

Preprocessing for loan tables, three classifiers of increasing complexity
behind one probability contract, from-scratch LIME / kernel SHAP / exact
Shapley attribution, a five-dimension explainability scorecard, and a CLI
that runs the whole pipeline reproducibly from a single seed.
"""

from .explain import (
    Background,
    Explainer,
    Explanation,
    PerturbConfig,
    exact_shapley,
    global_importance,
    kernel_shap_explain,
    lime_explain,
    sample_background,
    shap_kernel_weight,
    weighted_ridge,
)
from .ingest import (
    FeatureMatrix,
    MacroSeries,
    RawTable,
    Schema,
    SplitPair,
    load_csv,
    load_macro_csv,
    load_schema,
    prepare_dataset,
)
from .metrics import (
    EvalReport,
    comparison_table,
    confusion,
    evaluate_model,
    precision_recall_f1,
    roc_auc,
)
from .models import (
    ForestModel,
    LogisticModel,
    MlpModel,
    ProbClassifier,
    TrainConfig,
    load_model,
    predict_proba,
    save_model,
    train_forest,
    train_logistic,
    train_mlp,
)
from .reports import AdverseActionNotice, build_adverse_action, emit_report, read_report
from .scorecard import (
    DEFAULT_WEIGHTS,
    DIMENSIONS,
    ScoreCard,
    build_scorecard,
    composite,
    score_complexity,
    score_consistency,
    score_global,
    score_inherent,
    score_local,
)
from .synth import SynthConfig, write_corpus

__version__ = "0.1.0"
