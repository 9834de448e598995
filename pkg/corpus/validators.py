"""
Validação das invariantes do modelo de dados.
Cada violação gera um ValidationError que nomeia o registro problemático.
"""
import math
from collections import defaultdict

from django.core.exceptions import ValidationError

from corpus.models import Category, Gender, PtSubscription, Purpose

DISTANCE_TOLERANCE_M = 1.0


def _erro(mensagem, code='invariant'):
    return ValidationError(mensagem, code=code)


def _ids_unicos(registros, atributo, arquivo):
    vistos = set()
    for registro in registros:
        chave = getattr(registro, atributo)
        if chave in vistos:
            raise _erro(f"{arquivo}: {atributo} {chave} duplicado")
        vistos.add(chave)
    return vistos


def validate_stations(stations):
    ids = _ids_unicos(stations, 'station_id', 'stations.csv')
    for s in stations:
        if not (math.isfinite(s.x) and math.isfinite(s.y)):
            raise _erro(f"stations.csv: estação {s.station_id} com coordenadas não finitas")
    frota = {}
    for s in stations:
        for vid in s.vehicle_ids:
            if vid in frota:
                raise _erro(
                    f"vehicle_id {vid} aparece nas estações {frota[vid]} e {s.station_id}"
                )
            frota[vid] = s.station_id
    return ids


def validate_vehicle(v):
    if v.category not in Category.values:
        raise _erro(f"vehicles.csv: veículo {v.vehicle_id} com categoria desconhecida {v.category!r}")
    if not v.battery_kwh > 0:
        raise _erro(f"vehicles.csv: veículo {v.vehicle_id} com bateria não positiva")
    if v.max_charge_kw < 0 or v.max_discharge_kw < 0:
        raise _erro(f"vehicles.csv: veículo {v.vehicle_id} com potência negativa")
    if not v.consumption_kwh_per_km > 0:
        raise _erro(f"vehicles.csv: veículo {v.vehicle_id} com consumo não positivo")
    if not 0 <= v.soc_min < v.soc_max <= 1:
        raise _erro(f"vehicles.csv: veículo {v.vehicle_id} com faixa de SOC inválida")


def validate_agent(a):
    if not 1 <= a.age_group <= 6:
        raise _erro(f"agents.csv: agente {a.agent_id} com age_group {a.age_group} fora de 1..6")
    if a.gender not in Gender.values:
        raise _erro(f"agents.csv: agente {a.agent_id} com gênero inválido {a.gender!r}")
    if a.pt_subscription not in PtSubscription.values:
        raise _erro(f"agents.csv: agente {a.agent_id} com assinatura inválida {a.pt_subscription!r}")
    if not (math.isfinite(a.home_x) and math.isfinite(a.home_y)):
        raise _erro(f"agents.csv: agente {a.agent_id} com coordenadas não finitas")


def validate_trip(t):
    for proposito in (t.purpose_origin, t.purpose_dest):
        if proposito not in Purpose.values:
            raise _erro(f"trips.csv: viagem {t.trip_id} com propósito inválido {proposito!r}")
    if t.distance_m < 0:
        raise _erro(f"trips.csv: viagem {t.trip_id} com distância negativa")
    if t.t_dest_start < 0:
        raise _erro(f"trips.csv: viagem {t.trip_id} com horário negativo")
    euclidiana = math.hypot(t.dest_x - t.origin_x, t.dest_y - t.origin_y)
    if abs(euclidiana - t.distance_m) > DISTANCE_TOLERANCE_M:
        raise _erro(
            f"trips.csv: viagem {t.trip_id} com distance_m {t.distance_m} "
            f"diferente da distância euclidiana {euclidiana:.1f}"
        )


def validate_reservation(r):
    if not r.t_start < r.t_end:
        raise _erro(f"reservations.csv: reserva {r.reservation_id} com t_start >= t_end")
    if r.drive_km < 0:
        raise _erro(f"reservations.csv: reserva {r.reservation_id} com drive_km negativo")


def validate_no_overlap(reservations):
    """Reservas de um mesmo veículo não podem se sobrepor."""
    por_veiculo = defaultdict(list)
    for r in reservations:
        por_veiculo[r.vehicle_id].append(r)
    for vehicle_id, lista in por_veiculo.items():
        lista.sort(key=lambda r: (r.t_start, r.t_end))
        for anterior, atual in zip(lista, lista[1:]):
            if atual.t_start < anterior.t_end:
                raise _erro(
                    f"reservations.csv: reservas {anterior.reservation_id} e "
                    f"{atual.reservation_id} sobrepostas no veículo {vehicle_id}"
                )


def validate_bundle(bundle):
    """Valida todas as invariantes de um DatasetBundle; retorna o próprio bundle."""
    station_ids = validate_stations(bundle.stations)

    vehicle_ids = _ids_unicos(bundle.vehicles, 'vehicle_id', 'vehicles.csv')
    declarados = {vid: s.station_id for s in bundle.stations for vid in s.vehicle_ids}
    for v in bundle.vehicles:
        validate_vehicle(v)
        if v.station_id not in station_ids:
            raise _erro(f"vehicles.csv: veículo {v.vehicle_id} referencia estação inexistente {v.station_id}")
        if declarados.get(v.vehicle_id) != v.station_id:
            raise _erro(f"stations.csv: veículo {v.vehicle_id} não está na lista da estação {v.station_id}")
    if set(declarados) - vehicle_ids:
        faltando = min(set(declarados) - vehicle_ids)
        raise _erro(f"stations.csv: veículo {faltando} não existe em vehicles.csv")

    agent_ids = _ids_unicos(bundle.agents, 'agent_id', 'agents.csv')
    for a in bundle.agents:
        validate_agent(a)

    _ids_unicos(bundle.trips, 'trip_id', 'trips.csv')
    for t in bundle.trips:
        validate_trip(t)
        if t.agent_id not in agent_ids:
            raise _erro(f"trips.csv: viagem {t.trip_id} referencia agente inexistente {t.agent_id}")

    _ids_unicos(bundle.reservations, 'reservation_id', 'reservations.csv')
    for r in bundle.reservations:
        validate_reservation(r)
        if r.vehicle_id not in vehicle_ids:
            raise _erro(f"reservations.csv: reserva {r.reservation_id} referencia veículo inexistente {r.vehicle_id}")
        if r.agent_id not in agent_ids:
            raise _erro(f"reservations.csv: reserva {r.reservation_id} referencia agente inexistente {r.agent_id}")
        if r.station_id not in station_ids:
            raise _erro(f"reservations.csv: reserva {r.reservation_id} referencia estação inexistente {r.station_id}")
    validate_no_overlap(bundle.reservations)

    for i, carga in enumerate(bundle.dso_load):
        if not math.isfinite(carga):
            raise _erro(f"dso_load.csv: carga não finita no passo {i}")
    return bundle
