"""
Faixa viável de SOC e projeção exata de um plano de potência sobre ela.

O piso é calculado de trás para frente: em cada passo o veículo precisa de
SOC suficiente para, carregando no máximo, cumprir todas as saídas futuras e
o SOC terminal. O teto é soc_max. Qualquer plano que mantenha o SOC na faixa
é viável; `repair_schedule` corrige passo a passo o que o solver deixou de
fora por tolerância numérica.
"""
import numpy as np

TOLERANCE = 1e-9


def _ganho_maximo(perfil):
    """Ganho máximo de SOC por passo (V × T) carregando na potência nominal."""
    B = perfil.capacity_kwh[:, None]
    return perfil.eta_charge * perfil.max_charge_kw[:, None] * perfil.dt_hours * perfil.at_station / B


def soc_floor(perfil):
    V, T = perfil.n_vehicles, perfil.n_steps
    piso = np.empty((V, T + 1))
    piso[:, T] = perfil.soc_terminal
    dreno = perfil.drain_kwh / perfil.capacity_kwh[:, None]
    ganho = _ganho_maximo(perfil)
    for t in range(T - 1, -1, -1):
        piso[:, t] = np.maximum(perfil.soc_min, piso[:, t + 1] + dreno[:, t] - ganho[:, t])
    return piso


def max_soc_trajectory(perfil):
    V, T = perfil.n_vehicles, perfil.n_steps
    soc = np.empty((V, T + 1))
    soc[:, 0] = perfil.soc_initial
    dreno = perfil.drain_kwh / perfil.capacity_kwh[:, None]
    ganho = _ganho_maximo(perfil)
    for t in range(T):
        soc[:, t + 1] = np.minimum(perfil.soc_max, soc[:, t] + ganho[:, t]) - dreno[:, t]
    return soc


def soc_trajectory(perfil, pplus, pminus):
    """soc[t+1] = soc[t] + (η_c p⁺ − p⁻/η_d)·Δh/B − dreno/B."""
    B = perfil.capacity_kwh[:, None]
    delta = (perfil.eta_charge * pplus - pminus / perfil.eta_discharge) * perfil.dt_hours / B
    delta = delta - perfil.drain_kwh / B
    soc = np.empty((perfil.n_vehicles, perfil.n_steps + 1))
    soc[:, 0] = perfil.soc_initial
    soc[:, 1:] = perfil.soc_initial[:, None] + np.cumsum(delta, axis=1)
    return soc


def net_overlap(perfil, pplus, pminus):
    """
    Elimina carga e descarga simultâneas no mesmo passo. A energia líquida de
    cada passo, e portanto o SOC, fica igual; as potências só diminuem.
    """
    energia = perfil.eta_charge * np.asarray(pplus, dtype=float) - np.asarray(pminus, dtype=float) / perfil.eta_discharge
    return (
        np.where(energia > 0, energia / perfil.eta_charge, 0.0),
        np.where(energia < 0, -energia * perfil.eta_discharge, 0.0),
    )


def repair_schedule(perfil, power):
    """
    Projeta a potência líquida (V × T, kW, positiva carregando) sobre a faixa
    viável. Devolve (p⁺, p⁻, soc) com o SOC exatamente na faixa.
    """
    V, T = perfil.n_vehicles, perfil.n_steps
    power = np.asarray(power, dtype=float).reshape(V, T)
    B = perfil.capacity_kwh
    dt = perfil.dt_hours
    eta_c, eta_d = perfil.eta_charge, perfil.eta_discharge
    piso = soc_floor(perfil)

    pplus = np.zeros((V, T))
    pminus = np.zeros((V, T))
    soc = np.empty((V, T + 1))
    soc[:, 0] = perfil.soc_initial
    for t in range(T):
        disponivel = perfil.at_station[:, t]
        p = np.clip(power[:, t], -perfil.max_discharge_kw, perfil.max_charge_kw) * disponivel
        dreno = perfil.drain_kwh[:, t] / B

        proximo = _next_soc(soc[:, t], p, dreno, B, dt, eta_c, eta_d)
        alvo = np.where(proximo > perfil.soc_max, perfil.soc_max, proximo)
        alvo = np.where(alvo < piso[:, t + 1], piso[:, t + 1], alvo)
        ajustar = (alvo != proximo) & disponivel
        if np.any(ajustar):
            delta = alvo - soc[:, t] + dreno
            corrigida = np.where(delta >= 0, delta * B / (eta_c * dt), delta * B * eta_d / dt)
            corrigida = np.clip(corrigida, -perfil.max_discharge_kw, perfil.max_charge_kw)
            p = np.where(ajustar, corrigida, p)
            proximo = _next_soc(soc[:, t], p, dreno, B, dt, eta_c, eta_d)

        pplus[:, t] = np.maximum(p, 0.0)
        pminus[:, t] = np.maximum(-p, 0.0)
        soc[:, t + 1] = proximo
    return pplus, pminus, soc


def _next_soc(soc, p, dreno, B, dt, eta_c, eta_d):
    energia = np.where(p >= 0, eta_c * p, p / eta_d) * dt
    return soc + energia / B - dreno


def schedule_violations(perfil, pplus, pminus, soc, tol=1e-6):
    """Lista de restrições violadas por um plano; vazia quando o plano é viável."""
    problemas = []
    fora = ~perfil.at_station
    if np.any(pplus < -tol) or np.any(pminus < -tol):
        problemas.append("potência negativa")
    if np.any(pplus > perfil.max_charge_kw[:, None] + tol):
        problemas.append("carga acima da potência máxima")
    if np.any(pminus > perfil.max_discharge_kw[:, None] + tol):
        problemas.append("descarga acima da potência máxima")
    if np.any(np.abs(pplus[fora]) > tol) or np.any(np.abs(pminus[fora]) > tol):
        problemas.append("potência com o veículo fora da estação")
    if np.any(soc < perfil.soc_min[:, None] - tol) or np.any(soc > perfil.soc_max[:, None] + tol):
        problemas.append("SOC fora de [soc_min, soc_max]")
    if np.any(soc[:, -1] < perfil.soc_terminal - tol):
        problemas.append("SOC terminal abaixo do exigido")
    indice = {int(v): i for i, v in enumerate(perfil.vehicle_ids)}
    for req in perfil.requirements:
        if soc[indice[req.vehicle_id], req.step] < req.soc_required - tol:
            problemas.append(f"reserva {req.reservation_id} sai com SOC insuficiente")
    if not np.allclose(soc, soc_trajectory(perfil, pplus, pminus), atol=tol):
        problemas.append("SOC não segue a dinâmica de energia")
    return problemas
