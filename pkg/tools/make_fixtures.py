"""Regenerate the bundled model fixtures under tests/fixtures/.

world2.json is a 100-symbol reconstruction of the World2 dependency
structure (5 level sectors, their rates, multiplier/table auxiliaries,
policy-switch constants). market42.json is a 42-symbol sales-growth
model used for unclustered runs.
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def var(name, kind="auxiliary", deps=(), inflows=(), outflows=()):
    entry = {"name": name, "kind": kind, "depends_on": list(deps)}
    if kind == "stock":
        entry["inflows"] = list(inflows)
        entry["outflows"] = list(outflows)
    return entry


def world2():
    v = []
    # Population sector
    v.append(var("POP", "stock", ["POPI"], inflows=["BR"], outflows=["DR"]))
    v.append(var("POPI"))
    v.append(var("BR", "flow", ["POP", "TIME", "BRN", "BRN1", "SWT1",
                                "BRFM", "BRMM", "BRCM", "BRPM"]))
    v.append(var("DR", "flow", ["POP", "TIME", "DRN", "DRN1", "SWT3",
                                "DRMM", "DRPM", "DRFM", "DRCM"]))
    for c in ("BRN", "BRN1", "SWT1", "DRN", "DRN1", "SWT3"):
        v.append(var(c))
    for mult, inp in (("BRFM", "FR"), ("BRMM", "MSL"), ("BRCM", "CR"),
                      ("BRPM", "POLR"), ("DRMM", "MSL"), ("DRPM", "POLR"),
                      ("DRFM", "FR"), ("DRCM", "CR")):
        v.append(var(mult, deps=[inp, mult + "T"]))
        v.append(var(mult + "T"))
    v.append(var("CR", deps=["POP", "LA", "PDN"]))
    v.append(var("LA"))
    v.append(var("PDN"))
    # Food sector
    v.append(var("FR", deps=["FPCI", "FCM", "FPM", "FN", "FN1", "SWT7", "TIME"]))
    for c in ("FN", "FN1", "SWT7"):
        v.append(var(c))
    v.append(var("FCM", deps=["CR", "FCMT"]))
    v.append(var("FCMT"))
    v.append(var("FPM", deps=["POLR", "FPMT"]))
    v.append(var("FPMT"))
    v.append(var("FPCI", deps=["CIRA", "FPCIT"]))
    v.append(var("FPCIT"))
    v.append(var("CIRA", deps=["CIR", "CIAF", "CIAFN"]))
    v.append(var("CIR", deps=["CI", "POP"]))
    # Natural resource sector
    v.append(var("NR", "stock", ["NRI"], outflows=["NRUR"]))
    v.append(var("NRI"))
    v.append(var("NRUR", "flow", ["POP", "TIME", "NRUN", "NRUN1", "SWT2", "NRMM"]))
    for c in ("NRUN", "NRUN1", "SWT2"):
        v.append(var(c))
    v.append(var("NRMM", deps=["MSL", "NRMMT"]))
    v.append(var("NRMMT"))
    v.append(var("NREM", deps=["NRFR", "NREMT"]))
    v.append(var("NREMT"))
    v.append(var("NRFR", deps=["NR", "NRI"]))
    v.append(var("MSL", deps=["ECIR", "ECIRN"]))
    v.append(var("ECIRN"))
    v.append(var("ECIR", deps=["CIR", "CIAF", "NREM", "CIAFN"]))
    v.append(var("CIAFN"))
    # Capital sector
    v.append(var("CI", "stock", ["CII"], inflows=["CIG"], outflows=["CID"]))
    v.append(var("CII"))
    v.append(var("CIG", "flow", ["POP", "TIME", "CIM", "CIGN", "CIGN1", "SWT4"]))
    for c in ("CIGN", "CIGN1", "SWT4"):
        v.append(var(c))
    v.append(var("CIM", deps=["MSL", "CIMT"]))
    v.append(var("CIMT"))
    v.append(var("CID", "flow", ["CI", "TIME", "CIDN", "CIDN1", "SWT5"]))
    for c in ("CIDN", "CIDN1", "SWT5"):
        v.append(var(c))
    # Pollution sector
    v.append(var("POL", "stock", ["POLI"], inflows=["POLG"], outflows=["POLA"]))
    v.append(var("POLI"))
    v.append(var("POLG", "flow", ["POP", "TIME", "POLN", "POLN1", "SWT6", "POLCM"]))
    for c in ("POLN", "POLN1", "SWT6"):
        v.append(var(c))
    v.append(var("POLCM", deps=["CIR", "POLCMT"]))
    v.append(var("POLCMT"))
    v.append(var("POLR", deps=["POL", "POLS"]))
    v.append(var("POLS"))
    v.append(var("POLA", "flow", ["POL", "POLAT"]))
    v.append(var("POLAT", deps=["POLR", "POLATT"]))
    v.append(var("POLATT"))
    # Agriculture fraction sector
    v.append(var("CIAF", "stock", ["CIAFI"], inflows=["CIAFC"]))
    v.append(var("CIAFI"))
    v.append(var("CIAFC", "flow", ["CFIFR", "CIQR", "CIAF", "CIAFT"]))
    v.append(var("CIAFT"))
    v.append(var("CFIFR", deps=["CIAF", "CFIFRT"]))
    v.append(var("CFIFRT"))
    v.append(var("CIQR", deps=["QLM", "QLF", "CIQRT"]))
    v.append(var("CIQRT"))
    # Quality of life
    v.append(var("QL", deps=["QLS", "QLM", "QLC", "QLF", "QLP"]))
    v.append(var("QLS"))
    v.append(var("QLM", deps=["MSL", "QLMT"]))
    v.append(var("QLMT"))
    v.append(var("QLC", deps=["CR", "QLCT"]))
    v.append(var("QLCT"))
    v.append(var("QLF", deps=["FR", "QLFT"]))
    v.append(var("QLFT"))
    v.append(var("QLP", deps=["POLR", "QLPT"]))
    v.append(var("QLPT"))
    v.append(var("TIME"))
    return {"variables": v}


def market42():
    v = []
    v.append(var("Salesmen", "stock", ["SalesmenInit"],
                 inflows=["SalesmenHired"], outflows=["SalesmenLeaving"]))
    v.append(var("SalesmenInit"))
    v.append(var("SalesmenHired", "flow",
                 ["IndicatedSalesmen", "Salesmen", "SalesmenAdjTime"]))
    v.append(var("SalesmenLeaving", "flow", ["Salesmen", "TenureTime"]))
    v.append(var("SalesmenAdjTime"))
    v.append(var("TenureTime"))
    v.append(var("IndicatedSalesmen", deps=["Budget", "SalesmanSalary"]))
    v.append(var("Budget", deps=["OrdersBookedAvg", "RevenueToSales"]))
    v.append(var("SalesmanSalary"))
    v.append(var("RevenueToSales"))
    v.append(var("OrdersBookedAvg", deps=["OrdersBooked", "BookingAvgTime"]))
    v.append(var("BookingAvgTime"))
    v.append(var("Backlog", "stock", ["BacklogInit"],
                 inflows=["OrdersBooked"], outflows=["OrdersCompleted"]))
    v.append(var("BacklogInit"))
    v.append(var("OrdersBooked", "flow", ["Salesmen", "SalesEffectiveness"]))
    v.append(var("OrdersCompleted", "flow", ["Backlog", "DeliveryDelayActual"]))
    v.append(var("SalesEffectiveness", deps=["SalesEffMax", "DeliveryDelayMult"]))
    v.append(var("SalesEffMax"))
    v.append(var("DeliveryDelayMult",
                 deps=["DeliveryDelayRecognized", "DelayMultTable"]))
    v.append(var("DelayMultTable"))
    v.append(var("DeliveryDelayActual", deps=["Backlog", "ProductionCapacity"]))
    v.append(var("DeliveryDelayRecognized", "stock", ["DDRInit"],
                 inflows=["DDRChange"]))
    v.append(var("DDRInit"))
    v.append(var("DDRChange", "flow",
                 ["DeliveryDelayActual", "DeliveryDelayRecognized", "DDRTime"]))
    v.append(var("DDRTime"))
    v.append(var("ProductionCapacity",
                 deps=["CapacityOrdered", "CapacityDelay"]))
    v.append(var("CapacityDelay"))
    v.append(var("CapacityOrdered",
                 deps=["CapacityExpansion", "ProductionCapacity"]))
    v.append(var("CapacityExpansion",
                 deps=["DeliveryDelayCondition", "ExpansionBias"]))
    v.append(var("ExpansionBias"))
    v.append(var("DeliveryDelayCondition",
                 deps=["DeliveryDelayRecognized", "DeliveryDelayGoal"]))
    v.append(var("DeliveryDelayGoal"))
    v.append(var("OrderRate", deps=["OrdersBooked", "MarketSize"]))
    v.append(var("MarketSize", deps=["MarketGrowth"]))
    v.append(var("MarketGrowth", deps=["OrderRate", "GrowthTable"]))
    v.append(var("GrowthTable"))
    v.append(var("RevenueRate", deps=["OrdersCompleted", "Price"]))
    v.append(var("Price"))
    v.append(var("CashBalance", deps=["RevenueRate", "Budget"]))
    v.append(var("HiringPolicy", deps=["CashBalance", "PolicyTable"]))
    v.append(var("PolicyTable"))
    v.append(var("SalesForecast", deps=["OrdersBookedAvg", "MarketGrowth"]))
    return {"variables": v}


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    for name, doc in (("world2.json", world2()), ("market42.json", market42())):
        names = [e["name"] for e in doc["variables"]]
        assert len(names) == len(set(names)), f"{name}: duplicate names"
        path = FIXTURES / name
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"{name}: {len(names)} symbols")


if __name__ == "__main__":
    main()
