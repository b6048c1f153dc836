"""Check plugins: auto-registers all built-in checks on import."""

from xns11.checks.derive import (
    ConstantsCheck,
    CuspValuesCheck,
    GeneratorsCheck,
    MapsCheck,
    RemarksCheck,
    TraceCheck,
    UnitsCheck,
)
from xns11.checks.isom import IsomorphismCheck, QuotientCheck
from xns11.checks.periods import Genus2PeriodsCheck, NewPeriodsCheck, NsPeriodsCheck
from xns11.checks.registry import register_check

register_check("constants", ConstantsCheck)
register_check("units", UnitsCheck)
register_check("generators", GeneratorsCheck)
register_check("cusps", CuspValuesCheck)
register_check("trace", TraceCheck)
register_check("remarks", RemarksCheck)
register_check("maps", MapsCheck)
register_check("periods.x0121-new", NewPeriodsCheck)
register_check("periods.xns11", NsPeriodsCheck)
register_check("periods.genus2", Genus2PeriodsCheck)
register_check("isom.gl8", IsomorphismCheck)
register_check("isom.quotients", QuotientCheck)
