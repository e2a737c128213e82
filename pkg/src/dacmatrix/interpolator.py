"""Estimator-style front door to the interpolation engine.

``AccessMatrixInterpolator`` follows the scikit-learn contract: engine
settings are constructor parameters (``get_params``/``set_params``
work, the estimator clones cleanly), ``fit`` consumes a policy document
and materializes the interpolated matrix, and ``predict`` answers
effective access queries for (subject, object) pairs. The fitted state
lives in trailing-underscore attributes.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import engine
from .engine import AccessMatrix, Explanation, allowed_rights
from .model import PolicyUniverse
from .policyfile import PolicyDocument, build_log


class AccessMatrixInterpolator(BaseEstimator):
    """Fill an access matrix from precedents and answer access queries.

    Parameters
    ----------
    mode:
        ``"partial"``, ``"sequential"``, or ``None`` to use the fitted
        document's setting.
    dominance_depth:
        ``"lexicographic"``, ``"strict-paper"``, or ``None`` to use the
        document's setting.

    Examples
    --------
    >>> from dacmatrix import AccessMatrixInterpolator, parse_policy
    >>> doc = parse_policy(open("policy.policy.json").read())  # doctest: +SKIP
    >>> est = AccessMatrixInterpolator(mode="partial").fit(doc)  # doctest: +SKIP
    >>> est.predict([("S1", "O2")])  # doctest: +SKIP
    [()]
    """

    def __init__(self, mode: str | None = None, dominance_depth: str | None = None):
        self.mode = mode
        self.dominance_depth = dominance_depth

    def fit(self, X: PolicyDocument, y=None) -> "AccessMatrixInterpolator":
        """Admit the document's precedents and interpolate the matrix.

        The document's collision strategy governs admission; a document
        whose precedents cannot all be admitted (rejections or pending
        collisions) is refused with ``ValueError``.
        """
        if not isinstance(X, PolicyDocument):
            raise TypeError("fit expects a PolicyDocument")
        universe = X.universe()
        log, outcomes = build_log(X, universe=universe)
        refused = [o for o in outcomes if o.status != "admitted"]
        if refused:
            details = "; ".join(
                f"{o.precedent.describe()} {o.status} "
                f"(collides with {o.conflict.describe() if o.conflict else '?'})"
                for o in refused
            )
            raise ValueError(f"document precedents are not admissible: {details}")
        mode = self.mode or X.settings.mode
        depth = self.dominance_depth or X.settings.dominance_depth
        self.universe_: PolicyUniverse = universe
        self.admitted_ = log.admitted()
        self.mode_ = mode
        self.dominance_depth_ = depth
        self.matrix_: AccessMatrix = engine.interpolate(universe, self.admitted_, mode, depth)
        self.n_subjects_ = len(self.matrix_.subjects)
        self.n_objects_ = len(self.matrix_.objects)
        return self

    def predict(self, X) -> list[tuple[str, ...]]:
        """Effective allowed rights for each (subject_id, object_id) pair.

        Undefined and denied cells yield the empty tuple: everything
        that is not allowed is forbidden.
        """
        check_is_fitted(self, "matrix_")
        out = []
        for pair in X:
            subject_id, object_id = pair
            cell = self._cell(subject_id, object_id)
            out.append(tuple(sorted(allowed_rights(cell))))
        return out

    def explain(self, subject_id: str, object_id: str) -> Explanation:
        """Provenance trace for one cell."""
        check_is_fitted(self, "matrix_")
        sid = self.universe_.rep_id(subject_id)
        oid = self.universe_.rep_id(object_id)
        return engine.explain_cell(self.matrix_, sid, oid)

    def _cell(self, subject_id: str, object_id: str):
        sid = self.universe_.rep_id(subject_id)
        oid = self.universe_.rep_id(object_id)
        return self.matrix_.cell(sid, oid)
