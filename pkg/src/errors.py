"""ワークベンチ共通の例外クラス

CLI は SchemaError を終了コード 2、チェック失敗を終了コード 1 に対応付ける。
"""


class WorkbenchError(Exception):
    """全例外の基底クラス"""


class ConfigurationError(WorkbenchError):
    """ルートインデックス N の不一致、族・階数の不整合など"""


class RankMismatchError(ConfigurationError):
    """階数の異なる Weyl 元・ウェイトの演算"""


class DescriptorMismatchError(ConfigurationError):
    """異なる代数記述子に属する元・加群の演算"""


class ScalarDomainError(WorkbenchError):
    """t0 での特殊化が定義されない"""


class DivisionByZeroError(WorkbenchError, ZeroDivisionError):
    """分母が 0"""


class InternalConsistencyError(WorkbenchError):
    """割り切れるはずの除算で余りが出た（実装のバグ）"""


class RelationViolationError(WorkbenchError):
    """外部加群が定義関係式を満たさない"""

    def __init__(self, message: str, failures=None):
        super().__init__(message)
        self.failures = failures or []


class UnsupportedModuleError(WorkbenchError):
    """固有値が符号付き単項式でない"""


class SingularWeightError(WorkbenchError):
    """τ 作用素の分母がウェイトで消える"""

    def __init__(self, message: str, factor: str = ''):
        super().__init__(message)
        self.factor = factor


class UnsupportedRegimeError(WorkbenchError):
    """重複度 1 の仮定が崩れている"""


class MisuseError(WorkbenchError):
    """実験の前提条件違反"""


class SchemaError(WorkbenchError):
    """マニフェスト・加群ファイル・CLI 略記の形式エラー"""
