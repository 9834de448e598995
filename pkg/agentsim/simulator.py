"""
Simulador de reservas baseado em agentes.

As viagens são processadas em ordem de instante de decisão. Um agente sem
carro consulta o modelo de escolha modal; se o modo for CarSharing, pega o
veículo livre de menor id na estação livre mais próxima da origem. Um agente
com carro segue de carro até voltar ao ponto onde o pegou (tolerância de 1 m);
quem ainda estiver com o carro no fim do dia devolve às 24:00.
"""
import heapq
import logging
import math
from dataclasses import dataclass, field

from django.conf import settings

from agentsim.decision import compute_decision_time
from corpus.exceptions import SimulationError
from corpus.io import parse_int, parse_optional_float, parse_str, read_rows, write_rows
from corpus.models import Mode, Reservation
from modechoice.choosers import GbtModeChooser
from modechoice.features import default_pt_grid, extract_features
from population.generator import nearest_station

logger = logging.getLogger(__name__)

DAY_MINUTES = 1440
LOCATION_TOLERANCE_M = 1.0
RELEASE, DECISION = 0, 1


@dataclass(frozen=True)
class RawSegment:
    agent_id: int
    vehicle_id: int
    station_id: int
    t_start: int
    t_end: int
    drive_km: float
    forced_return: bool = False


@dataclass(frozen=True)
class SimLogEntry:
    trip_id: int
    t_decision: int
    predicted_mode: str
    station_distance_m: float | None
    day: int = 0


@dataclass
class Holding:
    vehicle_id: int
    station_id: int
    pickup_x: float
    pickup_y: float
    t_pickup: int
    segment_start: int
    last_x: float
    last_y: float
    km: float = 0.0


@dataclass
class SimulationResult:
    reservations: tuple = ()
    raw: tuple = ()
    sim_log: tuple = ()
    pickups: int = 0
    returns: int = 0
    forced_returns: int = 0
    unserved: int = 0


@dataclass
class _State:
    idle: dict
    holding: dict = field(default_factory=dict)
    eventos: list = field(default_factory=list)
    raw: list = field(default_factory=list)
    log: list = field(default_factory=list)
    pickups: int = 0
    returns: int = 0
    forced: int = 0
    unserved: int = 0

    def idle_counts(self):
        return {sid: len(livres) for sid, livres in self.idle.items()}


def _as_chooser(model, seed):
    if hasattr(model, 'choose'):
        return model
    return GbtModeChooser(model, seed=seed)


def _apply_trip(estado, agent_id, h, trip, offset):
    """Registra o trecho de uma viagem feita com o carro e devolve se ela fecha a reserva."""
    km = trip.distance_m / 1000.0
    inicio = h.segment_start
    fim = max(offset + trip.t_dest_start, inicio + 1)
    estado.raw.append(RawSegment(agent_id, h.vehicle_id, h.station_id, inicio, fim, km))
    h.km += km
    h.segment_start = fim
    h.last_x, h.last_y = trip.dest_x, trip.dest_y
    if math.hypot(trip.dest_x - h.pickup_x, trip.dest_y - h.pickup_y) <= LOCATION_TOLERANCE_M:
        heapq.heappush(estado.eventos, (fim, RELEASE, h.vehicle_id, h.station_id))
        del estado.holding[agent_id]
        estado.returns += 1
        logger.debug("agente %d devolveu o veículo %d às %d", agent_id, h.vehicle_id, fim)


def _force_returns(estado, fim_do_dia):
    for agent_id in sorted(estado.holding):
        h = estado.holding[agent_id]
        fim = max(fim_do_dia, h.segment_start + 1)
        volta_km = math.hypot(h.last_x - h.pickup_x, h.last_y - h.pickup_y) / 1000.0
        estado.raw.append(RawSegment(agent_id, h.vehicle_id, h.station_id, h.segment_start, fim, volta_km, True))
        heapq.heappush(estado.eventos, (fim, RELEASE, h.vehicle_id, h.station_id))
        estado.returns += 1
        estado.forced += 1
        logger.info("agente %d: devolução forçada do veículo %d às %d", agent_id, h.vehicle_id, fim)
    estado.holding.clear()


def _decide(estado, trip, agent, stations, chooser, grid, t_decision, offset, weekday, dia):
    h = estado.holding.get(agent.agent_id)
    if h is not None:
        estado.log.append(SimLogEntry(trip.trip_id, t_decision, Mode.CAR_SHARING.value, None, dia))
        _apply_trip(estado, agent.agent_id, h, trip, offset)
        return

    livres = estado.idle_counts()
    atributos = extract_features(trip, agent, stations, livres, t_decision - offset, grid, day=weekday)
    try:
        modo = str(chooser.choose(atributos))
    except Exception as exc:
        raise SimulationError(f"viagem {trip.trip_id}: falha no modelo de escolha modal ({exc})", trip.trip_id) from exc
    estado.log.append(SimLogEntry(trip.trip_id, t_decision, modo, atributos.station_distance_origin_m, dia))
    if modo != Mode.CAR_SHARING:
        return

    disponiveis = tuple(s for s in stations if livres.get(s.station_id, 0) > 0)
    if not disponiveis:
        estado.unserved += 1
        logger.debug("viagem %d: CarSharing sem veículo livre", trip.trip_id)
        return
    station_id, _ = nearest_station(trip.origin_x, trip.origin_y, disponiveis)
    vehicle_id = min(estado.idle[station_id])
    estado.idle[station_id].discard(vehicle_id)
    h = Holding(
        vehicle_id=vehicle_id,
        station_id=station_id,
        pickup_x=trip.origin_x,
        pickup_y=trip.origin_y,
        t_pickup=t_decision,
        segment_start=t_decision,
        last_x=trip.origin_x,
        last_y=trip.origin_y,
    )
    estado.holding[agent.agent_id] = h
    estado.pickups += 1
    _apply_trip(estado, agent.agent_id, h, trip, offset)


def simulate_reservations(trips, agents, stations, vehicles, model, seed=None, grid=None,
                          days=1, start_weekday=None):
    """
    Simula `days` dias consecutivos com as mesmas viagens (tempos deslocados
    em 1440 min por dia). Devolve reservas já fundidas e o log de decisões.
    """
    chooser = _as_chooser(model, seed)
    grid = grid or default_pt_grid()
    start_weekday = settings.FLEETGRID_START_WEEKDAY if start_weekday is None else start_weekday
    por_agente = {a.agent_id: a for a in agents}
    estado = _State(idle={s.station_id: set() for s in stations})
    for v in vehicles:
        estado.idle.setdefault(v.station_id, set()).add(v.vehicle_id)

    decisoes = sorted((compute_decision_time(t), t.trip_id, t) for t in trips)
    for dia in range(days):
        offset = dia * DAY_MINUTES
        weekday = (start_weekday + dia) % 7
        for t_decision, trip_id, trip in decisoes:
            heapq.heappush(estado.eventos, (offset + t_decision, DECISION, trip_id, trip))

        fim_do_dia = offset + DAY_MINUTES
        while estado.eventos and estado.eventos[0][0] < fim_do_dia:
            tempo, tipo, chave, carga = heapq.heappop(estado.eventos)
            if tipo == RELEASE:
                estado.idle.setdefault(carga, set()).add(chave)
                continue
            agente = por_agente.get(carga.agent_id)
            if agente is None:
                raise SimulationError(f"viagem {chave}: agente {carga.agent_id} inexistente", chave)
            _decide(estado, carga, agente, stations, chooser, grid, tempo, offset, weekday, dia)

        _force_returns(estado, fim_do_dia)

    reservas = merge_reservations(estado.raw)
    logger.info(
        "simulação: %d reservas, %d retiradas, %d devoluções (%d forçadas), %d sem veículo",
        len(reservas), estado.pickups, estado.returns, estado.forced, estado.unserved,
    )
    return SimulationResult(
        reservations=reservas,
        raw=tuple(estado.raw),
        sim_log=tuple(estado.log),
        pickups=estado.pickups,
        returns=estado.returns,
        forced_returns=estado.forced,
        unserved=estado.unserved,
    )


def merge_reservations(raw):
    """
    Funde trechos consecutivos do mesmo (agente, veículo) que se tocam ou se
    sobrepõem. Sobreposição entre agentes diferentes num mesmo veículo é erro.
    """
    por_veiculo = {}
    for segmento in raw:
        por_veiculo.setdefault(segmento.vehicle_id, []).append(segmento)

    fundidas = []
    for vehicle_id in sorted(por_veiculo):
        atual = None
        for s in sorted(por_veiculo[vehicle_id], key=lambda s: (s.t_start, s.t_end, s.agent_id)):
            if atual is not None and s.agent_id == atual['agent_id'] and s.t_start <= atual['t_end']:
                atual['t_end'] = max(atual['t_end'], s.t_end)
                atual['drive_km'] += s.drive_km
                atual['forced_return'] = atual['forced_return'] or s.forced_return
                continue
            if atual is not None and s.t_start < atual['t_end']:
                raise SimulationError(
                    f"veículo {vehicle_id} reservado pelos agentes {atual['agent_id']} e {s.agent_id} "
                    f"ao mesmo tempo ({s.t_start} < {atual['t_end']})"
                )
            if atual is not None:
                fundidas.append(atual)
            atual = {
                'vehicle_id': vehicle_id,
                'agent_id': s.agent_id,
                'station_id': s.station_id,
                't_start': s.t_start,
                't_end': s.t_end,
                'drive_km': s.drive_km,
                'forced_return': s.forced_return,
            }
        if atual is not None:
            fundidas.append(atual)

    fundidas.sort(key=lambda r: (r['t_start'], r['vehicle_id']))
    return tuple(Reservation(reservation_id=i, **r) for i, r in enumerate(fundidas))


# ─── sim_log.csv ──────────────────────────────────────────────
SIM_LOG = ('sim_log.csv', [
    ('trip_id', parse_int), ('t_decision', parse_int), ('predicted_mode', parse_str),
    ('station_distance_m', parse_optional_float), ('day', parse_int),
])


def write_sim_log(path, entries):
    write_rows(path, SIM_LOG, entries)


def read_sim_log(path):
    return tuple(SimLogEntry(**linha) for linha in read_rows(path, SIM_LOG, required=True))
